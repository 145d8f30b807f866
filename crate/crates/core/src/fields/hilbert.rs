//! Hilbert symbols over `Q_v` and isotropy of `a x^2 + b y^2 - z^2`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{primes, Elem, FieldKind, PAdic};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn sign_bit(odd: bool) -> i32 {
    if odd {
        -1
    } else {
        1
    }
}

/// `(a, b)_p` for `a = p^alpha u`, `b = p^beta v` with `u`, `v` units
/// given modulo `p` (odd `p`) or modulo 8 (`p = 2`).
fn local_symbol(p: u64, alpha: i64, u: u64, beta: i64, v: u64) -> i32 {
    let (alpha, beta) = (alpha.rem_euclid(2), beta.rem_euclid(2));
    if p == 2 {
        let eps = |x: u64| (x % 8 - 1) / 2 % 2;
        let omega = |x: u64| ((x % 8) * (x % 8) - 1) / 8 % 2;
        let e = eps(u) * eps(v) + alpha as u64 * omega(v) + beta as u64 * omega(u);
        return sign_bit(e % 2 == 1);
    }
    let mut s = sign_bit(alpha * beta == 1 && p % 4 == 3);
    if beta == 1 {
        s *= primes::legendre_u64(u, p);
    }
    if alpha == 1 {
        s *= primes::legendre_u64(v, p);
    }
    s
}

fn split_rational(r: &BigRational, p: u64) -> (i64, u64) {
    // a = n/d has the class of n*d
    let n = r.numer() * r.denom();
    let pb = BigInt::from(p);
    let (v, rest) = primes::split_valuation(&n, &pb);
    let m = BigInt::from(if p == 2 { 8u64 } else { p });
    (v, rest.mod_floor(&m).to_u64().unwrap())
}

/// `(a, b)_v`: `+1` iff `a x^2 + b y^2 = z^2` has a nonzero solution
/// over `Q_v`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(p) => {
            if !primes::is_prime_u64(*p) {
                return Err(Error::BadParameter(format!("{p} is not prime")));
            }
            let (alpha, u) = split_rational(a, *p);
            let (beta, v) = split_rational(b, *p);
            Ok(local_symbol(*p, alpha, u, beta, v))
        }
    }
}

/// Hilbert symbol of two p-adic field elements.
pub fn hilbert_symbol_local(a: &Elem, b: &Elem) -> Result<i32> {
    let FieldKind::PAdic { p, .. } = a.field().kind() else {
        return Err(Error::Unsupported("local symbol needs a p-adic field".into()));
    };
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(format!("{} vs {}", a.field(), b.field())));
    }
    let digits = if *p == 2 { 3 } else { 1 };
    let pb = BigInt::from(*p);
    let parts = |x: &Elem| -> Result<(i64, u64)> {
        match x.padic().unwrap() {
            PAdic::Exact0 => Err(Error::ZeroArgument),
            PAdic::Zero { .. } => Err(Error::PrecisionExhausted(format!("{x} is O(p^k)"))),
            u @ PAdic::Unit { val, .. } => {
                let r = u.unit_mod(&pb, digits).ok_or_else(|| {
                    Error::PrecisionExhausted(format!("{x} has too few digits"))
                })?;
                Ok((*val, r.to_u64().unwrap()))
            }
        }
    };
    let (alpha, u) = parts(a)?;
    let (beta, v) = parts(b)?;
    Ok(local_symbol(*p, alpha, u, beta, v))
}

/// The places where `(a, b)_v` can be `-1`: infinity, 2 and the odd
/// primes dividing a numerator or denominator.
pub fn relevant_places(a: &BigRational, b: &BigRational) -> Result<Vec<Place>> {
    let mut ps: Vec<BigUint> = Vec::new();
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        ps.extend(primes::odd_prime_divisors(n)?);
    }
    ps.sort();
    ps.dedup();
    let mut out = vec![Place::Infinity, Place::Prime(2)];
    for p in ps {
        let p = p
            .to_u64()
            .ok_or_else(|| Error::FactorizationLimit(format!("prime {p} exceeds 64 bits")))?;
        out.push(Place::Prime(p));
    }
    Ok(out)
}

/// Isotropy of `a x^2 + b y^2 - z^2` over `Q` by the Hasse principle.
pub fn is_isotropic_ternary(a: &BigRational, b: &BigRational) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    for v in relevant_places(a, b)? {
        if hilbert_symbol(a, b, &v)? == -1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn standard_values() {
        assert_eq!(hilbert_symbol(&q(6), &q(-6), &Place::Prime(5)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), &Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), &Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(3), &q(-1), &Place::Prime(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(5), &Place::Prime(5)).unwrap(), -1);
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(hilbert_symbol(&third, &q(3), &Place::Prime(3)).unwrap(), -1);
    }

    #[test]
    fn isotropy() {
        assert!(is_isotropic_ternary(&q(1), &q(-1)).unwrap());
        assert!(!is_isotropic_ternary(&q(-1), &q(-1)).unwrap());
        assert!(!is_isotropic_ternary(&q(2), &q(3)).unwrap());
        assert!(is_isotropic_ternary(&q(2), &q(7)).unwrap());
    }
}
