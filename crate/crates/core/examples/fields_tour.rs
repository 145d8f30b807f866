//! Arithmetic in each supported field, parsed from text the way the CLI does.

use sl2_decomp::error::Result;
use sl2_decomp::fields::{parse_elem, parse_field};

fn main() -> Result<()> {
    let cases = [
        ("Q", "3/4", "-2/9"),
        ("F7", "3", "5"),
        ("F9", "[1,1]", "[0,2]"),
        ("Qp(5,10)", "1/5", "7"),
        ("Q(sqrt(5))", "1 + sqrt(5)", "(1 - sqrt(5))/2"),
        ("F2(t)", "t + 1", "1/(t^2 + t + 1)"),
    ];
    for (spec, x, y) in cases {
        let f = parse_field(spec)?;
        let (x, y) = (parse_elem(&f, x)?, parse_elem(&f, y)?);
        println!("{f}");
        println!("  x + y = {}", &x + &y);
        println!("  x * y = {}", &x * &y);
        println!("  x / y = {}", x.div(&y)?);
        println!("  x square? {}", x.is_square()?);
    }

    // p-adic precision is tracked through cancellation
    let q5 = parse_field("Qp(5,10)")?;
    let a = parse_elem(&q5, "1 + 5^8")?;
    let d = &a - &q5.one();
    println!("(1 + 5^8) - 1 = {d}, relative precision {:?}", d.precision());
    Ok(())
}
