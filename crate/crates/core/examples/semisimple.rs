//! Non-semisimple points of the symmetric space for square m, and the
//! refinement g = h q u with q semisimple.

use sl2_decomp::error::Result;
use sl2_decomp::fields::parse_field;
use sl2_decomp::involution::parse_involution;
use sl2_decomp::mat2::{is_semisimple, parse_mat};
use sl2_decomp::symspace::{construct_nonsemisimple_in_q, semisimplify_decomposition, witness_in_q};

fn main() -> Result<()> {
    for (spec, tau) in [("Q", "tau(1)"), ("Q", "tau(9)"), ("F5", "tau(4)"), ("Q7", "tau(2)")] {
        let f = parse_field(spec)?;
        let inv = parse_involution(&f, tau)?;
        for x in [1, 2, 3] {
            let q = construct_nonsemisimple_in_q(&inv, &f.int(x))?;
            let in_q = witness_in_q(&q, &inv, None)?.verdict.is_yes();
            println!(
                "{spec} {tau} x={x}: q = {q}  trace {}  semisimple {}  in Q {in_q}",
                q.trace(),
                is_semisimple(&q)?
            );
        }
    }

    let f = parse_field("Q")?;
    let inv = parse_involution(&f, "tau(1)")?;
    let g = parse_mat(&f, "2,1;1,1")?;
    let r = semisimplify_decomposition(&g, &inv)?;
    println!("\ng = {g} = h q u with semisimple q:\n  h = {}\n  q = {}\n  u = {}", r.h, r.q, r.u);
    Ok(())
}
