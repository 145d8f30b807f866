//! Writing q = g tau(g)^-1: each route the witness search can take.

use sl2_decomp::error::Result;
use sl2_decomp::fields::parse_field_ambient;
use sl2_decomp::involution::parse_involution;
use sl2_decomp::mat2::parse_mat;
use sl2_decomp::symspace::{is_witness, witness_in_q};

fn main() -> Result<()> {
    let cases = [
        ("F7", "tau(3)", "1,1;4,5"),
        ("Q", "tau(1)", "2,3;-3,-4"),
        ("Q", "tau(4)", "3,1;-4,-1"),
        ("R", "tau(1)", "4,1;-1,0"),
        ("R", "tau(1)", "-2,1;-1,0"),
        ("Qbar", "tau(2)", "-1,0;0,-1"),
        ("Q3", "tau(3)", "1/3,0;0,3"),
        ("Q5", "tau(2)", "4,0;0,1/4"),
        ("Q", "tau(2)", "3,0;0,1/3"),
        ("Q", "tau(-1)", "2,1;1,1"),
    ];
    for (spec, tau, q) in cases {
        let (f, amb) = parse_field_ambient(spec)?;
        let inv = parse_involution(&f, tau)?;
        let q = parse_mat(&f, q)?;
        let r = witness_in_q(&q, &inv, amb)?;
        print!("{spec:5} {tau:8} q = {q:<14} {:<24}", format!("{:?}", r.route));
        match r.witness() {
            Some(g) => {
                let inv = inv.extend(&r.witness_field)?;
                let q = q.embed(&r.witness_field)?;
                println!("g = {g} over {} (checks: {})", r.witness_field, is_witness(g, &q, &inv)?);
            }
            None => println!("{}", r.certificate.as_deref().unwrap_or(r.verdict.label())),
        }
    }
    Ok(())
}
