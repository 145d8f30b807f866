//! Square-class representatives, Hilbert symbols and the Hasse principle
//! for ternary forms a x^2 + b y^2 - z^2.

use num_rational::BigRational;
use sl2_decomp::error::Result;
use sl2_decomp::fields::{
    hilbert_symbol, is_isotropic_ternary, parse_elem, parse_field, relevant_places, SquareClassReps,
};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn main() -> Result<()> {
    for spec in ["F7", "F9", "Q3", "Q2", "Q5"] {
        let f = parse_field(spec)?;
        if let SquareClassReps::Finite(reps) = f.square_class_reps() {
            let shown: Vec<String> = reps
                .iter()
                .map(|r| {
                    let v = r.rep.small_rational().map(|q| q.to_string()).unwrap_or(r.rep.to_string());
                    match &r.label {
                        Some(l) => format!("{v} ({l})"),
                        None => v,
                    }
                })
                .collect();
            println!("{spec}: {}", shown.join(", "));
        }
    }

    let q = parse_field("Q")?;
    for x in ["12", "-18/7", "50"] {
        let c = q.square_class(&parse_elem(&q, x)?)?;
        println!("class of {x} in Q: {}", c.rep);
    }

    for (a, b) in [(6, -6), (2, 3), (-1, -1), (3, 5), (7, -3)] {
        let (a, b) = (rat(a), rat(b));
        let mut line = format!("({a},{b}):");
        let mut product = 1;
        for v in relevant_places(&a, &b)? {
            let s = hilbert_symbol(&a, &b, &v)?;
            product *= s;
            line.push_str(&format!(" {v}:{s:+}"));
        }
        let iso = is_isotropic_ternary(&a, &b)?;
        println!("{line}  product {product:+}  isotropic over Q: {iso}");
    }
    Ok(())
}
