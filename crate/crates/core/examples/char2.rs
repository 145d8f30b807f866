//! Characteristic 2: the H w Q~ factorization over F4 under tau0, and
//! tau_m over the rational function field F2(t).

use sl2_decomp::census::sl2_elements;
use sl2_decomp::decomp::{decompose, decompose_char2_finite, FactorOrder};
use sl2_decomp::error::Result;
use sl2_decomp::fields::{parse_elem, parse_field, Field};
use sl2_decomp::involution::{make_involution, make_tau0};
use sl2_decomp::mat2::parse_mat;

fn main() -> Result<()> {
    let f4 = Field::finite(4)?;
    let tau0 = make_tau0(&f4)?;
    let all = sl2_elements(&f4)?;
    for g in all.iter().take(4) {
        let r = decompose_char2_finite(g, &tau0)?;
        println!("F4: {g} = {} * {} * {}", r.h, r.w, r.q);
    }
    let ok = all.iter().all(|g| decompose_char2_finite(g, &tau0).is_ok());
    println!("all {} elements of SL2(F4) factor: {ok}\n", all.len());

    let k = parse_field("F2(t)")?;
    for m in ["t^2", "t"] {
        let inv = make_involution(&k, &parse_elem(&k, m)?)?;
        for g in ["1,t;0,1", "t,1;1,0", "1,1;t,1+t"] {
            let g = parse_mat(&k, g)?;
            let v = decompose(&g, &inv, FactorOrder::HQU)?;
            match v.witness() {
                Some(r) => println!("m = {m}: {g} = {} * {} * {}", r.h, r.q, r.u),
                None => println!("m = {m}: {g}: {}", v.label()),
            }
        }
    }
    Ok(())
}
