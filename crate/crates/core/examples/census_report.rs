//! Subgroup sizes, intersection counts and torus orbits over small finite
//! fields. Pass field orders as arguments (default 3 5 7).

use sl2_decomp::census::{census_report, format_census};
use sl2_decomp::error::Result;
use sl2_decomp::fields::Field;
use sl2_decomp::involution::make_involution;

fn main() -> Result<()> {
    let mut qs: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if qs.is_empty() {
        qs = vec![3, 5, 7];
    }
    for q in qs {
        let f = Field::finite(q)?;
        let mut ms = vec![f.one()];
        ms.extend(f.least_non_square());
        for m in ms {
            let c = census_report(&make_involution(&f, &m)?)?;
            print!("{}", format_census(&c));
            println!();
        }
    }
    Ok(())
}
