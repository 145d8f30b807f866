//! Fixed relative-precision p-adic numbers.
//!
//! A nonzero value is `p^val * unit` where `unit` is known modulo
//! `p^rel` and is coprime to `p`. Sums can cancel leading digits, in which
//! case the relative precision shrinks; products keep the smaller of the
//! two relative precisions. A sum that cancels every known digit becomes
//! `Zero { abs }` ("zero modulo p^abs"), which is distinct from the exact
//! zero produced by literals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::primes::split_valuation;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum PAdic {
    Exact0,
    Zero { abs: i64 },
    Unit { val: i64, unit: BigInt, rel: u32 },
}

fn ppow(p: &BigInt, k: u32) -> BigInt {
    num_traits::pow(p.clone(), k as usize)
}

fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

impl PAdic {
    pub fn from_rational(r: &BigRational, p: &BigInt, prec: u32) -> PAdic {
        if r.is_zero() {
            return PAdic::Exact0;
        }
        let (vn, n) = split_valuation(r.numer(), p);
        let (vd, d) = split_valuation(r.denom(), p);
        let m = ppow(p, prec);
        let unit = (n.mod_floor(&m) * modinv(&d.mod_floor(&m), &m)).mod_floor(&m);
        PAdic::Unit { val: vn - vd, unit, rel: prec }
    }

    pub fn is_zero(&self) -> bool {
        !matches!(self, PAdic::Unit { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, PAdic::Exact0)
    }

    /// Valuation of a nonzero value; the known lower bound for `Zero`.
    pub fn valuation(&self) -> Option<i64> {
        match self {
            PAdic::Exact0 => None,
            PAdic::Zero { abs } => Some(*abs),
            PAdic::Unit { val, .. } => Some(*val),
        }
    }

    /// Exponent `A` such that the value is known modulo `p^A`.
    pub fn abs_precision(&self) -> Option<i64> {
        match self {
            PAdic::Exact0 => None,
            PAdic::Zero { abs } => Some(*abs),
            PAdic::Unit { val, rel, .. } => Some(val + *rel as i64),
        }
    }

    pub fn rel_precision(&self) -> Option<u32> {
        match self {
            PAdic::Exact0 => None,
            PAdic::Zero { .. } => Some(0),
            PAdic::Unit { rel, .. } => Some(*rel),
        }
    }

    pub fn neg(&self, p: &BigInt) -> PAdic {
        match self {
            PAdic::Unit { val, unit, rel } => {
                let m = ppow(p, *rel);
                PAdic::Unit { val: *val, unit: (&m - unit).mod_floor(&m), rel: *rel }
            }
            other => other.clone(),
        }
    }

    pub fn add(&self, other: &PAdic, p: &BigInt) -> PAdic {
        match (self, other) {
            (PAdic::Exact0, y) => return y.clone(),
            (x, PAdic::Exact0) => return x.clone(),
            _ => {}
        }
        let abs = self.abs_precision().unwrap().min(other.abs_precision().unwrap());
        let vmin = [self, other]
            .iter()
            .filter_map(|x| match x {
                PAdic::Unit { val, .. } => Some(*val),
                _ => None,
            })
            .min();
        let Some(vmin) = vmin else {
            return PAdic::Zero { abs };
        };
        if abs <= vmin {
            return PAdic::Zero { abs };
        }
        let width = (abs - vmin) as u32;
        let modulus = ppow(p, width);
        let mut sum = BigInt::zero();
        for x in [self, other] {
            if let PAdic::Unit { val, unit, .. } = x {
                let shift = (*val - vmin) as u32;
                if shift < width {
                    sum += unit * ppow(p, shift);
                }
            }
        }
        let sum = sum.mod_floor(&modulus);
        if sum.is_zero() {
            return PAdic::Zero { abs };
        }
        let (k, rest) = split_valuation(&sum, p);
        let val = vmin + k;
        let rel = (abs - val) as u32;
        PAdic::Unit { val, unit: rest.mod_floor(&ppow(p, rel)), rel }
    }

    pub fn mul(&self, other: &PAdic, p: &BigInt) -> PAdic {
        match (self, other) {
            (PAdic::Exact0, _) | (_, PAdic::Exact0) => PAdic::Exact0,
            (PAdic::Zero { abs: a }, y) | (y, PAdic::Zero { abs: a }) => {
                PAdic::Zero { abs: a + y.valuation().unwrap() }
            }
            (
                PAdic::Unit { val: v1, unit: u1, rel: r1 },
                PAdic::Unit { val: v2, unit: u2, rel: r2 },
            ) => {
                let rel = *r1.min(r2);
                let m = ppow(p, rel);
                PAdic::Unit { val: v1 + v2, unit: (u1 * u2).mod_floor(&m), rel }
            }
        }
    }

    pub fn inv(&self, p: &BigInt) -> Result<PAdic> {
        match self {
            PAdic::Exact0 => Err(Error::DivisionByZero),
            PAdic::Zero { abs } => Err(Error::PrecisionExhausted(format!(
                "cannot invert O({p}^{abs})"
            ))),
            PAdic::Unit { val, unit, rel } => {
                let m = ppow(p, *rel);
                Ok(PAdic::Unit { val: -val, unit: modinv(unit, &m), rel: *rel })
            }
        }
    }

    /// Unit part reduced modulo `p^k` (requires `k <= rel`).
    pub fn unit_mod(&self, p: &BigInt, k: u32) -> Option<BigInt> {
        match self {
            PAdic::Unit { unit, rel, .. } if *rel >= k => Some(unit.mod_floor(&ppow(p, k))),
            _ => None,
        }
    }

    fn require_unit(&self, p: &BigInt) -> Result<(i64, &BigInt, u32)> {
        match self {
            PAdic::Exact0 => Err(Error::ZeroArgument),
            PAdic::Zero { abs } => Err(Error::PrecisionExhausted(format!(
                "O({p}^{abs}) has no significant digits"
            ))),
            PAdic::Unit { val, unit, rel } => Ok((*val, unit, *rel)),
        }
    }

    pub fn is_square(&self, p: &BigInt) -> Result<bool> {
        let (val, unit, rel) = self.require_unit(p)?;
        if val.rem_euclid(2) != 0 {
            return Ok(false);
        }
        if *p == BigInt::from(2) {
            if rel < 3 {
                return Err(Error::PrecisionExhausted(
                    "2-adic square test needs three unit digits".into(),
                ));
            }
            return Ok(unit.mod_floor(&BigInt::from(8)) == BigInt::one());
        }
        let e = (p - 1u32) / 2u32;
        Ok(unit.mod_floor(p).modpow(&e, p).is_one())
    }

    /// Canonical square root. For odd `p` the root whose unit part is
    /// congruent to a residue in `[1, (p-1)/2]`; for `p = 2` the root whose
    /// unit is `1 mod 4`, known to one digit less than the input.
    pub fn sqrt(&self, p: &BigInt) -> Result<Option<PAdic>> {
        if self.is_exact_zero() {
            return Ok(Some(PAdic::Exact0));
        }
        if !self.is_square(p)? {
            return Ok(None);
        }
        let (val, unit, rel) = self.require_unit(p)?;
        let half = val / 2;
        if *p == BigInt::from(2) {
            let mut x = BigInt::one();
            for k in 3..rel {
                let m = ppow(p, k + 1);
                if (&x * &x - unit).mod_floor(&m) != BigInt::zero() {
                    x += ppow(p, k - 1);
                }
            }
            let out_rel = rel - 1;
            let m = ppow(p, out_rel);
            let mut x = x.mod_floor(&m);
            if x.mod_floor(&BigInt::from(4)) != BigInt::one() {
                x = (&m - x).mod_floor(&m);
            }
            return Ok(Some(PAdic::Unit { val: half, unit: x, rel: out_rel }));
        }
        let pu: u64 = p.try_into().map_err(|_| Error::Unsupported("prime too large".into()))?;
        let r0: u64 = (unit.mod_floor(p)).try_into().unwrap();
        let mut root = super::primes::sqrt_mod_prime(r0, pu).expect("residue checked");
        if root > (pu - 1) / 2 {
            root = pu - root;
        }
        let mut x = BigInt::from(root);
        let mut k = 1u32;
        while k < rel {
            k = (2 * k).min(rel);
            let m = ppow(p, k);
            let fx = (&x * &x - unit).mod_floor(&m);
            let dfx = (BigInt::from(2) * &x).mod_floor(&m);
            x = (&x - fx * modinv(&dfx, &m)).mod_floor(&m);
        }
        Ok(Some(PAdic::Unit { val: half, unit: x, rel }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn inverse_of_p() {
        let p = BigInt::from(3);
        let three = PAdic::from_rational(&q(3, 1), &p, 5);
        match three.inv(&p).unwrap() {
            PAdic::Unit { val, unit, rel } => {
                assert_eq!(val, -1);
                assert_eq!(unit, BigInt::one());
                assert_eq!(rel, 5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cancellation_loses_relative_precision() {
        let p = BigInt::from(3);
        let a = PAdic::from_rational(&q(1, 1), &p, 10);
        let b = PAdic::from_rational(&q(-1 + 243, 1), &p, 10);
        match a.add(&b, &p) {
            PAdic::Unit { val, rel, .. } => {
                assert_eq!(val, 5);
                assert_eq!(rel, 5);
            }
            other => panic!("{other:?}"),
        }
        let z = a.add(&a.neg(&p), &p);
        assert!(matches!(z, PAdic::Zero { abs: 10 }));
        assert!(matches!(z.inv(&p), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn hensel_square_root_of_two_mod_seven() {
        let p = BigInt::from(7);
        let two = PAdic::from_rational(&q(2, 1), &p, 6);
        let r = two.sqrt(&p).unwrap().unwrap();
        assert_eq!(r.unit_mod(&p, 1), Some(BigInt::from(3)));
        let sq = r.mul(&r, &p);
        let diff = sq.add(&two.neg(&p), &p);
        assert!(diff.is_zero());
        assert_eq!(diff.abs_precision(), Some(6));
    }

    #[test]
    fn two_adic_squares() {
        let p = BigInt::from(2);
        let x = PAdic::from_rational(&q(17, 1), &p, 20);
        assert!(x.is_square(&p).unwrap());
        let r = x.sqrt(&p).unwrap().unwrap();
        let d = r.mul(&r, &p).add(&x.neg(&p), &p);
        assert!(d.is_zero());
        assert!(!PAdic::from_rational(&q(3, 1), &p, 20).is_square(&p).unwrap());
        assert!(!PAdic::from_rational(&q(2, 1), &p, 20).is_square(&p).unwrap());
    }
}
