//! Why the unipotent factor is needed: an element of SL2(Q(sqrt 5)) that
//! is not in H Q~ for tau_1, next to one that is.

use sl2_decomp::decomp::{decompose_hqu, requires_unipotent};
use sl2_decomp::error::Result;
use sl2_decomp::fields::{parse_field, Field};
use sl2_decomp::involution::make_involution;
use sl2_decomp::mat2::{parse_mat, Mat2};
use sl2_decomp::verdict::MembershipVerdict;

fn show(v: &MembershipVerdict<Mat2>) -> String {
    match v {
        MembershipVerdict::Yes(h) => format!("Yes, h = {h}"),
        MembershipVerdict::No(why) => format!("No: {why}"),
        MembershipVerdict::Undecided(why) => format!("Undecided: {why}"),
    }
}

fn main() -> Result<()> {
    let k = parse_field("Q(sqrt(5))")?;
    let c = &k.generator()? - &k.int(3);
    let g = Mat2::new(k.one(), k.int(2).div(&c)?, c.div(&k.int(2))?, k.int(2))?;
    let tau = make_involution(&k, &k.one())?;
    println!("g = {g}");
    println!("g in H Q~: {}", show(&requires_unipotent(&g, &tau)?));
    let r = decompose_hqu(&g, &tau)?;
    println!("but g = h q u with\n  h = {}\n  q = {}\n  u = {}", r.h, r.q, r.u);

    let q = Field::rationals();
    let tau = make_involution(&q, &q.one())?;
    let g = parse_mat(&q, "5/4,3/4;3/4,5/4")?.mul(&parse_mat(&q, "2,1;-1,0")?);
    println!("\n{g} in H Q~: {}", show(&requires_unipotent(&g, &tau)?));
    Ok(())
}
