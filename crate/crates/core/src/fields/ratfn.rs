//! Reduced quotients of polynomials over `F_p`: `num / den` with
//! `gcd(num, den) = 1` and `den` monic.

use super::poly::{self, Poly};
use super::primes::inv_mod;

pub type RatFn = (Poly, Poly);

pub fn normalize(num: Poly, den: Poly, p: u64) -> RatFn {
    let num = poly::trim(num);
    let den = poly::trim(den);
    assert!(!den.is_empty(), "zero denominator");
    if num.is_empty() {
        return (Vec::new(), vec![1]);
    }
    let g = poly::gcd(&num, &den, p);
    let (mut n, _) = poly::divrem(&num, &g, p);
    let (mut d, _) = poly::divrem(&den, &g, p);
    let lead = *d.last().unwrap();
    let li = inv_mod(lead, p);
    n = poly::scale(&n, li, p);
    d = poly::scale(&d, li, p);
    (n, d)
}

pub fn add(a: &RatFn, b: &RatFn, p: u64) -> RatFn {
    let n = poly::add(&poly::mul(&a.0, &b.1, p), &poly::mul(&b.0, &a.1, p), p);
    normalize(n, poly::mul(&a.1, &b.1, p), p)
}

pub fn neg(a: &RatFn, p: u64) -> RatFn {
    (poly::neg(&a.0, p), a.1.clone())
}

pub fn mul(a: &RatFn, b: &RatFn, p: u64) -> RatFn {
    normalize(poly::mul(&a.0, &b.0, p), poly::mul(&a.1, &b.1, p), p)
}

/// `None` for zero.
pub fn inv(a: &RatFn, p: u64) -> Option<RatFn> {
    if a.0.is_empty() {
        return None;
    }
    Some(normalize(a.1.clone(), a.0.clone(), p))
}

pub fn sqrt(a: &RatFn, p: u64) -> Option<RatFn> {
    let n = poly::sqrt(&a.0, p)?;
    let d = poly::sqrt(&a.1, p)?;
    Some(normalize(n, d, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_common_factors() {
        // (t^2 - 1) / (t - 1) = t + 1 over F5
        let r = normalize(vec![4, 0, 1], vec![4, 1], 5);
        assert_eq!(r, (vec![1, 1], vec![1]));
        let x = (vec![0, 1], vec![1, 1]);
        let y = inv(&x, 5).unwrap();
        assert_eq!(mul(&x, &y, 5), (vec![1], vec![1]));
    }
}
