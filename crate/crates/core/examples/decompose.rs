//! Factor g = h q u with h fixed by tau, q in the extended symmetric space
//! and u unipotent, over several fields and in every factor order.

use sl2_decomp::decomp::{decompose_hqu, decompose_reordered, FactorOrder};
use sl2_decomp::error::Result;
use sl2_decomp::fields::parse_field;
use sl2_decomp::involution::parse_involution;
use sl2_decomp::mat2::parse_mat;

fn main() -> Result<()> {
    let cases = [
        ("Q", "tau(1)", "2,3;0,1/2"),
        ("Q", "tau(2)", "-1,0;-1,-1"),
        ("Q", "tau(1)", "0,1;-1,0"),
        ("F3", "tau(1)", "0,1;2,0"),
        ("Q7", "tau(3)", "1/7,2;-3,-35"),
    ];
    for (spec, tau, g) in cases {
        let f = parse_field(spec)?;
        let inv = parse_involution(&f, tau)?;
        let g = parse_mat(&f, g)?;
        let r = decompose_hqu(&g, &inv)?;
        r.validate(&g, &inv)?;
        println!("{spec} {inv}  g = {g}  [{:?}]", r.branch);
        println!("  h = {}\n  q = {}\n  u = {}", r.h, r.q, r.u);
    }

    let q = parse_field("Q")?;
    let inv = parse_involution(&q, "tau(-2)")?;
    let g = parse_mat(&q, "3,5;1,2")?;
    for order in FactorOrder::SIX {
        let r = decompose_reordered(&g, &inv, order)?;
        let shown: Vec<String> = r.factors().iter().map(|m| m.to_string()).collect();
        println!("{order}: {}", shown.join("  *  "));
    }
    Ok(())
}
