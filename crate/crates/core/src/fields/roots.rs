//! Square tests and canonical square roots.

use num_rational::BigRational;
use num_traits::Signed;

use super::{primes, ratfn, Elem, Field, FieldKind, Value};
use crate::error::{Error, Result};

/// How [`sqrt_with_extension`] may leave the input field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionMode {
    /// Only positive radicands; the new tower keeps its real embedding.
    Real,
    /// Any radicand; stands in for the algebraic closure.
    Closure,
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    if !primes::is_perfect_square(n) || !primes::is_perfect_square(d) {
        return None;
    }
    Some(BigRational::new(n.sqrt(), d.sqrt()))
}

impl Elem {
    /// Whether `self` is a nonzero square.
    pub fn is_square(&self) -> Result<bool> {
        if let Value::PAdic(x) = &self.value {
            return x.is_square(&self.field.padic_p());
        }
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(match (self.field.kind(), &self.value) {
            (FieldKind::PrimeField { p: 2 }, _) => true,
            (FieldKind::PrimeField { p }, Value::Residue(r)) => primes::legendre_u64(*r, *p) == 1,
            (FieldKind::GaloisField { p: 2, .. }, _) => true,
            (FieldKind::GaloisField { .. }, _) => {
                let q = self.field.order().unwrap();
                self.field.elem(self.field.pow_value(&self.value, (q - 1) / 2)).is_one()
            }
            _ => self.raw_sqrt()?.is_some(),
        })
    }

    /// Some root `y` with `y^2 = self`, without sign normalization.
    fn raw_sqrt(&self) -> Result<Option<Elem>> {
        let f = &self.field;
        if self.is_zero() && self.is_exact() {
            return Ok(Some(f.zero()));
        }
        Ok(match (f.kind(), &self.value) {
            (FieldKind::Rationals, Value::Rational(r)) => {
                rational_sqrt(r).map(|s| f.elem(Value::Rational(s)))
            }
            (FieldKind::PrimeField { p }, Value::Residue(r)) => {
                primes::sqrt_mod_prime(*r, *p).map(|s| f.elem(Value::Residue(s)))
            }
            (FieldKind::GaloisField { .. }, _) => galois_sqrt(self),
            (FieldKind::PAdic { .. }, Value::PAdic(x)) => {
                x.sqrt(&f.padic_p())?.map(|s| f.elem(Value::PAdic(s)))
            }
            (FieldKind::QuadExt { base, d, .. }, Value::Quad(_)) => {
                let (a, b) = self.quad_parts().unwrap();
                quad_sqrt(f, base, d, &a, &b)?
            }
            (FieldKind::RationalFunctionField { p }, Value::RatFn(nd)) => {
                ratfn::sqrt(nd, *p).map(|s| f.elem(Value::RatFn(Box::new(s))))
            }
            _ => unreachable!(),
        })
    }

    /// Canonical square root, or `None` when `self` is not a square.
    ///
    /// The root is the positive one under a real embedding and otherwise
    /// the one with [`Elem::is_positive_like`]. p-adic roots keep the
    /// residue choice of the Hensel lift: unit part in `[1, (p-1)/2]`
    /// modulo `p` for odd `p`, and `1 mod 4` for `p = 2`.
    pub fn sqrt(&self) -> Result<Option<Elem>> {
        let Some(y) = self.raw_sqrt()? else { return Ok(None) };
        if self.field.is_padic() || y.is_positive_like() {
            Ok(Some(y))
        } else {
            Ok(Some(-y))
        }
    }
}

fn galois_sqrt(x: &Elem) -> Option<Elem> {
    let f = &x.field;
    let q = f.order().unwrap();
    if f.characteristic() == 2 {
        // Frobenius is bijective: sqrt(x) = x^(q/2)
        return Some(f.elem(f.pow_value(&x.value, q / 2)));
    }
    if !f.elem(f.pow_value(&x.value, (q - 1) / 2)).is_one() {
        return None;
    }
    if q % 4 == 3 {
        return Some(f.elem(f.pow_value(&x.value, q.div_ceil(4))));
    }
    // Tonelli-Shanks in the multiplicative group of order q - 1.
    let mut s = 0;
    let mut t = q - 1;
    while t.is_multiple_of(2) {
        t /= 2;
        s += 1;
    }
    let z = (1..q)
        .map(|c| f.from_index(c))
        .find(|z| !f.elem(f.pow_value(&z.value, (q - 1) / 2)).is_one())
        .expect("odd order field has non-squares");
    let mut m = s;
    let mut c = z.pow(t as i64).unwrap();
    let mut tt = x.pow(t as i64).unwrap();
    let mut r = x.pow(t.div_ceil(2) as i64).unwrap();
    while !tt.is_one() {
        let mut i = 0;
        let mut probe = tt.clone();
        while !probe.is_one() {
            probe = probe.square();
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = b.square();
        }
        m = i;
        c = b.square();
        tt = &tt * &c;
        r = &r * &b;
    }
    Some(r)
}

/// Norm method: for `x = a + b r` with `r^2 = d`, a root `u + v r` has
/// `u^2 = (a + n)/2` with `n^2 = a^2 - d b^2`, and `v = b / (2u)`.
fn quad_sqrt(f: &Field, base: &Field, d: &Elem, a: &Elem, b: &Elem) -> Result<Option<Elem>> {
    let lift = |u: Elem, v: Elem| f.elem(Value::Quad(Box::new((u.value, v.value))));
    if b.is_zero() {
        if let Some(s) = a.sqrt()? {
            return Ok(Some(lift(s, base.zero())));
        }
        // a = d * (a/d), and sqrt(d) = r
        let ratio = a.div(d)?;
        return Ok(ratio.sqrt()?.map(|s| lift(base.zero(), s)));
    }
    let norm = &a.square() - &(d * &b.square());
    let Some(n) = norm.sqrt()? else { return Ok(None) };
    let half = base.int(2).inv()?;
    for cand in [a + &n, a - &n] {
        let u2 = &cand * &half;
        if u2.is_zero() {
            continue;
        }
        if let Some(u) = u2.sqrt()? {
            let v = b.div(&(&base.int(2) * &u))?;
            return Ok(Some(lift(u, v)));
        }
    }
    Ok(None)
}

/// `sqrt(x)` in the smallest tower containing it: the field of `x` when
/// `x` is already a square, otherwise a quadratic extension by the
/// squarefree kernel of `x` (or by `x` itself when it is not rational).
pub fn sqrt_with_extension(x: &Elem, mode: ExtensionMode) -> Result<(Field, Elem)> {
    let field = x.field();
    if mode == ExtensionMode::Real {
        if !field.is_real() {
            return Err(Error::Unsupported(format!("{field} has no real embedding")));
        }
        if x.sign() == Some(-1) {
            return Err(Error::NegativeUnderRealEmbedding);
        }
    }
    if x.is_zero() {
        return Ok((field.clone(), field.zero()));
    }
    if let Some(s) = x.sqrt()? {
        return Ok((field.clone(), s));
    }
    if !matches!(field.kind(), FieldKind::Rationals | FieldKind::QuadExt { .. }) {
        return Err(Error::Unsupported(format!("no extension tower over {field}")));
    }
    let d = match x.rational_part() {
        Some(r) => {
            let k = primes::squarefree_kernel(&(r.numer() * r.denom()))?;
            field.rational(&BigRational::from_integer(k))?
        }
        None => x.clone(),
    };
    let ext = Field::quad_ext(field, &d)?;
    // x = d * s^2 for the rational case, so sqrt(x) = s * sqrt(d)
    let ratio = x.div(&d)?;
    let s = ratio.sqrt()?.ok_or_else(|| {
        Error::PostconditionViolation(format!("{x}/{d} is not a square"))
    })?;
    let root = &ext.embed(&s)? * &ext.generator()?;
    let root = if mode == ExtensionMode::Real && root.sign() == Some(-1) {
        -root
    } else {
        root
    };
    Ok((ext, root))
}
