//! Normal forms of inner involutions: Inn(A) is conjugate to some tau_m
//! with m a square-class representative.

use sl2_decomp::error::Result;
use sl2_decomp::fields::parse_field;
use sl2_decomp::involution::{involution_from_matrix, is_isomorphic, parse_involution};
use sl2_decomp::mat2::parse_mat;

fn main() -> Result<()> {
    for (spec, a) in [("Q", "0,1;12,0"), ("Q", "1,2;3,-1"), ("F7", "2,1;1,5"), ("Q5", "0,1;10,0")] {
        let f = parse_field(spec)?;
        let a = parse_mat(&f, a)?;
        let nf = involution_from_matrix(&a)?;
        let x = nf.conjugator.conjugate(&a)?;
        println!("{spec}: A = {a} ~ {}  via chi = {}  (chi A chi^-1 = {x})", nf.involution, nf.conjugator);
    }

    let q = parse_field("Q")?;
    let pairs = [("tau(2)", "tau(8)"), ("tau(2)", "tau(3)"), ("tau(-1)", "tau(-4)")];
    for (s, t) in pairs {
        let iso = is_isomorphic(&parse_involution(&q, s)?, &parse_involution(&q, t)?)?;
        println!("{s} ~ {t} over Q: {iso}");
    }

    let tau = parse_involution(&q, "tau(2)")?;
    let h = tau.nontrivial_fixed_point()?;
    println!("fixed point of tau(2): {h}, tau(h) = {}", tau.apply(&h)?);
    Ok(())
}
