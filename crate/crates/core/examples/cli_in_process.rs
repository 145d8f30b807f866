//! Drive the `sl2` command line without spawning a process.

use sl2_decomp::cli::run;

fn main() {
    let calls: [&[&str]; 5] = [
        &["decompose", "--field", "Q", "--inv", "tau(2)", "--mat", "-1,0;-1,-1", "--format", "json"],
        &["hilbert", "--a", "6", "--b", "-6", "--place", "5"],
        &["square-class", "--field", "Q3", "--x", "6"],
        &["classify", "--field", "F11", "--mat", "3,1;2,-3"],
        &["verify-claims", "--field", "F5", "--m", "2", "--claims", "C1,C12"],
    ];
    for args in calls {
        let out = run(std::iter::once("sl2").chain(args.iter().copied()));
        println!("$ sl2 {}\n{}(exit {})\n", args.join(" "), out.stdout, out.code);
    }
}
