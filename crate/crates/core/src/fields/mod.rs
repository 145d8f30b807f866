//! Exact arithmetic over the fields the decompositions run on.
//!
//! A [`Field`] is a cheap, shareable descriptor; an [`Elem`] pairs a field
//! with a [`Value`] in canonical form. Arithmetic between elements of
//! different fields is a programming error: the operator impls panic, the
//! `try_*` methods return [`Error::FieldMismatch`].

mod hilbert;
mod padic;
mod parse;
pub mod poly;
pub mod primes;
mod ratfn;
mod roots;
mod squares;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use hilbert::{hilbert_symbol, hilbert_symbol_local, is_isotropic_ternary, relevant_places, Place};
pub use padic::PAdic;
pub use parse::{parse_elem, parse_field, parse_field_ambient};
pub(crate) use parse::split_top;
pub use roots::{sqrt_with_extension, ExtensionMode};
pub use squares::{SquareClassLabel, SquareClassReps, SquareClassRep};

use crate::error::{Error, Result};

/// Default relative precision of p-adic fields.
pub const DEFAULT_PADIC_PRECISION: u32 = 20;

const MAX_GALOIS_DEGREE: usize = 8;

#[derive(Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    PrimeField { p: u64 },
    GaloisField { p: u64, degree: usize, modulus: Vec<u64> },
    PAdic { p: u64, precision: u32 },
    /// `base(sqrt(d))`; `real` records whether the real embedding of the
    /// base extends with `sqrt(d) > 0`.
    QuadExt { base: Field, d: Elem, real: bool },
    RationalFunctionField { p: u64 },
}

#[derive(Clone, Debug)]
pub struct Field(Arc<FieldKind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Field {}

#[derive(Clone, Debug)]
pub enum Value {
    Rational(BigRational),
    Residue(u64),
    /// Galois-field residue polynomial of degree below the modulus degree.
    Poly(Vec<u64>),
    PAdic(PAdic),
    /// `a + b*sqrt(d)` with `a`, `b` in the base field.
    Quad(Box<(Value, Value)>),
    RatFn(Box<(Vec<u64>, Vec<u64>)>),
}

#[derive(Clone, Debug)]
pub struct Elem {
    field: Field,
    value: Value,
}

fn check_prime(p: u64) -> Result<()> {
    if !primes::is_prime_u64(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if p >= 1 << 62 {
        return Err(Error::InvalidField(format!("prime {p} is too large")));
    }
    Ok(())
}

impl Field {
    fn new(kind: FieldKind) -> Field {
        Field(Arc::new(kind))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    pub fn rationals() -> Field {
        Field::new(FieldKind::Rationals)
    }

    pub fn prime(p: u64) -> Result<Field> {
        check_prime(p)?;
        Ok(Field::new(FieldKind::PrimeField { p }))
    }

    /// `F_q` for a prime power `q`; non-prime orders use
    /// [`Field::default_modulus`].
    pub fn finite(q: u64) -> Result<Field> {
        let (p, r) = primes::prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if r == 1 {
            Field::prime(p)
        } else {
            Field::galois(p, r as usize)
        }
    }

    /// The first monic irreducible polynomial of degree `r` over `F_p` in
    /// the order of [`poly::monic_of_degree`].
    pub fn default_modulus(p: u64, r: usize) -> Result<Vec<u64>> {
        check_prime(p)?;
        if !(2..=MAX_GALOIS_DEGREE).contains(&r) {
            return Err(Error::InvalidField(format!("degree {r} outside 2..=8")));
        }
        Ok(poly::monic_of_degree(r, p)
            .find(|f| poly::is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree"))
    }

    pub fn galois(p: u64, r: usize) -> Result<Field> {
        let modulus = Field::default_modulus(p, r)?;
        Field::galois_with_modulus(p, modulus)
    }

    /// `F_p[x]/(modulus)`; the modulus is given low coefficient first and
    /// must be monic and irreducible.
    pub fn galois_with_modulus(p: u64, modulus: Vec<u64>) -> Result<Field> {
        check_prime(p)?;
        let modulus = poly::trim(modulus.into_iter().map(|c| c % p).collect());
        let degree = poly::degree(&modulus).unwrap_or(0);
        if !(2..=MAX_GALOIS_DEGREE).contains(&degree) {
            return Err(Error::InvalidField(format!("modulus degree {degree} outside 2..=8")));
        }
        if modulus[degree] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        let candidates: u64 = (1..=degree / 2).map(|d| p.saturating_pow(d as u32)).sum();
        if candidates > 5_000_000 {
            return Err(Error::InvalidField("modulus too large to validate".into()));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(Field::new(FieldKind::GaloisField { p, degree, modulus }))
    }

    pub fn padic(p: u64, precision: u32) -> Result<Field> {
        check_prime(p)?;
        if precision < 4 {
            return Err(Error::InvalidField("p-adic precision must be at least 4".into()));
        }
        Ok(Field::new(FieldKind::PAdic { p, precision }))
    }

    /// `base(sqrt(d))`; `d` must be a non-square of `base`.
    pub fn quad_ext(base: &Field, d: &Elem) -> Result<Field> {
        let d = base.embed(d)?;
        if base.characteristic() == 2 {
            return Err(Error::InvalidField("quadratic extensions need odd characteristic".into()));
        }
        if d.is_zero() || d.is_square()? {
            return Err(Error::InvalidField(format!("{d} is a square in {base}")));
        }
        let real = base.is_real() && d.sign() == Some(1);
        Ok(Field::new(FieldKind::QuadExt { base: base.clone(), d, real }))
    }

    pub fn rational_functions(p: u64) -> Result<Field> {
        check_prime(p)?;
        Ok(Field::new(FieldKind::RationalFunctionField { p }))
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::Rationals | FieldKind::PAdic { .. } => 0,
            FieldKind::PrimeField { p }
            | FieldKind::GaloisField { p, .. }
            | FieldKind::RationalFunctionField { p } => *p,
            FieldKind::QuadExt { base, .. } => base.characteristic(),
        }
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match self.kind() {
            FieldKind::PrimeField { p } => Some(*p),
            FieldKind::GaloisField { p, degree, .. } => p.checked_pow(*degree as u32),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Whether the field carries the real embedding used for sign decisions.
    pub fn is_real(&self) -> bool {
        match self.kind() {
            FieldKind::Rationals => true,
            FieldKind::QuadExt { real, .. } => *real,
            _ => false,
        }
    }

    pub fn is_padic(&self) -> bool {
        matches!(self.kind(), FieldKind::PAdic { .. })
    }

    /// The residue prime of a p-adic field.
    pub fn padic_prime(&self) -> Option<u64> {
        match self.kind() {
            FieldKind::PAdic { p, .. } => Some(*p),
            _ => None,
        }
    }

    fn padic_p(&self) -> BigInt {
        BigInt::from(self.padic_prime().expect("p-adic field"))
    }

    /// The chain of fields from `Q` (or another non-extension) up to `self`.
    pub fn tower(&self) -> Vec<Field> {
        let mut out = vec![self.clone()];
        let mut f = self.clone();
        while let FieldKind::QuadExt { base, .. } = f.kind() {
            let b = base.clone();
            out.push(b.clone());
            f = b;
        }
        out.reverse();
        out
    }

    pub fn ground(&self) -> Field {
        self.tower().remove(0)
    }

    pub fn contains(&self, sub: &Field) -> bool {
        self.tower().iter().any(|f| f == sub)
    }

    // ---- element constructors ----

    pub fn elem(&self, value: Value) -> Elem {
        Elem { field: self.clone(), value }
    }

    pub fn zero(&self) -> Elem {
        self.elem(self.zero_value())
    }

    pub fn one(&self) -> Elem {
        self.elem(self.one_value())
    }

    pub fn int(&self, n: i64) -> Elem {
        self.rational(&BigRational::from_integer(n.into()))
            .expect("integers embed in every field")
    }

    /// Image of a rational number; fails in characteristic `p` when `p`
    /// divides the denominator.
    pub fn rational(&self, r: &BigRational) -> Result<Elem> {
        Ok(self.elem(self.rational_value(r)?))
    }

    pub fn ratio(&self, n: i64, d: i64) -> Result<Elem> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        self.rational(&BigRational::new(n.into(), d.into()))
    }

    /// The generator `x` of a Galois field, `t` of a function field or
    /// `sqrt(d)` of a quadratic extension.
    pub fn generator(&self) -> Result<Elem> {
        match self.kind() {
            FieldKind::GaloisField { .. } => Ok(self.elem(Value::Poly(vec![0, 1]))),
            FieldKind::RationalFunctionField { .. } => {
                Ok(self.elem(Value::RatFn(Box::new((vec![0, 1], vec![1])))))
            }
            FieldKind::QuadExt { base, .. } => {
                Ok(self.elem(Value::Quad(Box::new((base.zero_value(), base.one_value())))))
            }
            _ => Err(Error::Unsupported(format!("{self} has no generator"))),
        }
    }

    /// Finite-field element with base-`p` encoding `code`.
    pub fn from_index(&self, code: u64) -> Elem {
        match self.kind() {
            FieldKind::PrimeField { p } => self.elem(Value::Residue(code % p)),
            FieldKind::GaloisField { p, degree, .. } => {
                let mut c = code;
                let mut v = Vec::with_capacity(*degree);
                for _ in 0..*degree {
                    v.push(c % p);
                    c /= p;
                }
                self.elem(Value::Poly(poly::trim(v)))
            }
            _ => panic!("from_index on an infinite field"),
        }
    }

    /// All elements of a finite field, ordered by encoding.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let q = self
            .order()
            .ok_or_else(|| Error::Unsupported(format!("{self} is infinite")))?;
        if q > 1 << 24 {
            return Err(Error::TooLarge(format!("field of order {q}")));
        }
        Ok((0..q).map(|c| self.from_index(c)).collect())
    }

    /// Coerce an element of a subfield of the tower into `self`.
    pub fn embed(&self, x: &Elem) -> Result<Elem> {
        if &x.field == self {
            return Ok(x.clone());
        }
        match self.kind() {
            FieldKind::QuadExt { base, .. } => {
                let inner = base.embed(x)?;
                Ok(self.elem(Value::Quad(Box::new((inner.value, base.zero_value())))))
            }
            FieldKind::PAdic { .. } if matches!(x.field.kind(), FieldKind::Rationals) => {
                self.rational(x.as_rational().unwrap())
            }
            _ => Err(Error::FieldMismatch(format!("cannot embed {} into {self}", x.field))),
        }
    }

    // ---- value-level arithmetic ----

    fn zero_value(&self) -> Value {
        match self.kind() {
            FieldKind::Rationals => Value::Rational(BigRational::zero()),
            FieldKind::PrimeField { .. } => Value::Residue(0),
            FieldKind::GaloisField { .. } => Value::Poly(Vec::new()),
            FieldKind::PAdic { .. } => Value::PAdic(PAdic::Exact0),
            FieldKind::QuadExt { base, .. } => {
                Value::Quad(Box::new((base.zero_value(), base.zero_value())))
            }
            FieldKind::RationalFunctionField { .. } => {
                Value::RatFn(Box::new((Vec::new(), vec![1])))
            }
        }
    }

    fn one_value(&self) -> Value {
        match self.kind() {
            FieldKind::Rationals => Value::Rational(BigRational::one()),
            FieldKind::PrimeField { .. } => Value::Residue(1),
            FieldKind::GaloisField { .. } => Value::Poly(vec![1]),
            FieldKind::PAdic { p, precision } => Value::PAdic(PAdic::from_rational(
                &BigRational::one(),
                &BigInt::from(*p),
                *precision,
            )),
            FieldKind::QuadExt { base, .. } => {
                Value::Quad(Box::new((base.one_value(), base.zero_value())))
            }
            FieldKind::RationalFunctionField { .. } => Value::RatFn(Box::new((vec![1], vec![1]))),
        }
    }

    fn rational_value(&self, r: &BigRational) -> Result<Value> {
        let reduce = |p: u64| -> Result<u64> {
            let pb = BigInt::from(p);
            let n = num_integer::Integer::mod_floor(r.numer(), &pb);
            let d = num_integer::Integer::mod_floor(r.denom(), &pb);
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let n: u64 = n.try_into().unwrap();
            let d: u64 = d.try_into().unwrap();
            Ok(primes::mul_mod(n, primes::inv_mod(d, p), p))
        };
        Ok(match self.kind() {
            FieldKind::Rationals => Value::Rational(r.clone()),
            FieldKind::PrimeField { p } => Value::Residue(reduce(*p)?),
            FieldKind::GaloisField { p, .. } => Value::Poly(poly::constant(reduce(*p)?, *p)),
            FieldKind::PAdic { p, precision } => {
                Value::PAdic(PAdic::from_rational(r, &BigInt::from(*p), *precision))
            }
            FieldKind::QuadExt { base, .. } => {
                Value::Quad(Box::new((base.rational_value(r)?, base.zero_value())))
            }
            FieldKind::RationalFunctionField { p } => {
                Value::RatFn(Box::new((poly::constant(reduce(*p)?, *p), vec![1])))
            }
        })
    }

    fn is_zero_value(&self, v: &Value) -> bool {
        match v {
            Value::Rational(r) => r.is_zero(),
            Value::Residue(r) => *r == 0,
            Value::Poly(c) => c.is_empty(),
            Value::PAdic(x) => x.is_zero(),
            Value::Quad(ab) => {
                let base = self.quad_base();
                base.is_zero_value(&ab.0) && base.is_zero_value(&ab.1)
            }
            Value::RatFn(nd) => nd.0.is_empty(),
        }
    }

    fn quad_base(&self) -> &Field {
        match self.kind() {
            FieldKind::QuadExt { base, .. } => base,
            _ => unreachable!("quadratic value outside a quadratic extension"),
        }
    }

    fn add_values(&self, a: &Value, b: &Value) -> Value {
        match (self.kind(), a, b) {
            (FieldKind::Rationals, Value::Rational(x), Value::Rational(y)) => Value::Rational(x + y),
            (FieldKind::PrimeField { p }, Value::Residue(x), Value::Residue(y)) => {
                Value::Residue((x + y) % p)
            }
            (FieldKind::GaloisField { p, .. }, Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(poly::add(x, y, *p))
            }
            (FieldKind::PAdic { .. }, Value::PAdic(x), Value::PAdic(y)) => {
                Value::PAdic(x.add(y, &self.padic_p()))
            }
            (FieldKind::QuadExt { base, .. }, Value::Quad(x), Value::Quad(y)) => Value::Quad(
                Box::new((base.add_values(&x.0, &y.0), base.add_values(&x.1, &y.1))),
            ),
            (FieldKind::RationalFunctionField { p }, Value::RatFn(x), Value::RatFn(y)) => {
                Value::RatFn(Box::new(ratfn::add(x, y, *p)))
            }
            _ => unreachable!("value does not belong to {self}"),
        }
    }

    fn neg_value(&self, a: &Value) -> Value {
        match (self.kind(), a) {
            (FieldKind::Rationals, Value::Rational(x)) => Value::Rational(-x),
            (FieldKind::PrimeField { p }, Value::Residue(x)) => Value::Residue((p - x) % p),
            (FieldKind::GaloisField { p, .. }, Value::Poly(x)) => {
                Value::Poly(poly::trim(poly::neg(x, *p)))
            }
            (FieldKind::PAdic { .. }, Value::PAdic(x)) => Value::PAdic(x.neg(&self.padic_p())),
            (FieldKind::QuadExt { base, .. }, Value::Quad(x)) => {
                Value::Quad(Box::new((base.neg_value(&x.0), base.neg_value(&x.1))))
            }
            (FieldKind::RationalFunctionField { p }, Value::RatFn(x)) => {
                Value::RatFn(Box::new(ratfn::neg(x, *p)))
            }
            _ => unreachable!("value does not belong to {self}"),
        }
    }

    fn mul_values(&self, a: &Value, b: &Value) -> Value {
        match (self.kind(), a, b) {
            (FieldKind::Rationals, Value::Rational(x), Value::Rational(y)) => Value::Rational(x * y),
            (FieldKind::PrimeField { p }, Value::Residue(x), Value::Residue(y)) => {
                Value::Residue(primes::mul_mod(*x, *y, *p))
            }
            (FieldKind::GaloisField { p, modulus, .. }, Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(poly::rem(&poly::mul(x, y, *p), modulus, *p))
            }
            (FieldKind::PAdic { .. }, Value::PAdic(x), Value::PAdic(y)) => {
                Value::PAdic(x.mul(y, &self.padic_p()))
            }
            (FieldKind::QuadExt { base, d, .. }, Value::Quad(x), Value::Quad(y)) => {
                // (a + b r)(c + e r) = (ac + d be) + (ae + bc) r
                let ac = base.mul_values(&x.0, &y.0);
                let be = base.mul_values(&x.1, &y.1);
                let re = base.add_values(&ac, &base.mul_values(&d.value, &be));
                let im = base.add_values(&base.mul_values(&x.0, &y.1), &base.mul_values(&x.1, &y.0));
                Value::Quad(Box::new((re, im)))
            }
            (FieldKind::RationalFunctionField { p }, Value::RatFn(x), Value::RatFn(y)) => {
                Value::RatFn(Box::new(ratfn::mul(x, y, *p)))
            }
            _ => unreachable!("value does not belong to {self}"),
        }
    }

    fn inv_value(&self, a: &Value) -> Result<Value> {
        match (self.kind(), a) {
            (FieldKind::PAdic { .. }, Value::PAdic(x)) => {
                return Ok(Value::PAdic(x.inv(&self.padic_p())?))
            }
            _ if self.is_zero_value(a) => return Err(Error::DivisionByZero),
            _ => {}
        }
        Ok(match (self.kind(), a) {
            (FieldKind::Rationals, Value::Rational(x)) => Value::Rational(x.recip()),
            (FieldKind::PrimeField { p }, Value::Residue(x)) => Value::Residue(primes::inv_mod(*x, *p)),
            (FieldKind::GaloisField { .. }, Value::Poly(_)) => {
                // x^(q-2) in the multiplicative group of order q-1
                let q = self.order().unwrap();
                self.pow_value(a, q - 2)
            }
            (FieldKind::QuadExt { base, d, .. }, Value::Quad(x)) => {
                // (a + b r)^-1 = (a - b r) / (a^2 - d b^2)
                let norm = base.add_values(
                    &base.mul_values(&x.0, &x.0),
                    &base.neg_value(&base.mul_values(&d.value, &base.mul_values(&x.1, &x.1))),
                );
                let ni = base.inv_value(&norm)?;
                Value::Quad(Box::new((
                    base.mul_values(&x.0, &ni),
                    base.neg_value(&base.mul_values(&x.1, &ni)),
                )))
            }
            (FieldKind::RationalFunctionField { p }, Value::RatFn(x)) => {
                Value::RatFn(Box::new(ratfn::inv(x, *p).ok_or(Error::DivisionByZero)?))
            }
            _ => unreachable!("value does not belong to {self}"),
        })
    }

    fn pow_value(&self, a: &Value, mut e: u64) -> Value {
        let mut acc = self.one_value();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_values(&acc, &base);
            }
            base = self.mul_values(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn eq_values(&self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Rational(x), Value::Rational(y)) => x == y,
            (Value::Residue(x), Value::Residue(y)) => x == y,
            (Value::Poly(x), Value::Poly(y)) => x == y,
            (Value::RatFn(x), Value::RatFn(y)) => x == y,
            (Value::Quad(x), Value::Quad(y)) => {
                let base = self.quad_base();
                base.eq_values(&x.0, &y.0) && base.eq_values(&x.1, &y.1)
            }
            (Value::PAdic(_), Value::PAdic(_)) => {
                self.is_zero_value(&self.add_values(a, &self.neg_value(b)))
            }
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::PrimeField { p } => write!(f, "F{p}"),
            FieldKind::GaloisField { p, degree, modulus } => {
                let q = p.pow(*degree as u32);
                let cs: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                write!(f, "F{q}[{}]", cs.join(","))
            }
            FieldKind::PAdic { p, precision } => write!(f, "Qp({p},{precision})"),
            FieldKind::QuadExt { base, d, .. } => write!(f, "{base}(sqrt({d}))"),
            FieldKind::RationalFunctionField { p } => write!(f, "F{p}(t)"),
        }
    }
}

// ---- elements ----

impl Elem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    fn same_field(&self, other: &Elem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)))
        }
    }

    pub fn try_add(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.add_values(&self.value, &other.value)))
    }

    pub fn try_sub(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        let n = self.field.neg_value(&other.value);
        Ok(self.field.elem(self.field.add_values(&self.value, &n)))
    }

    pub fn try_mul(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.mul_values(&self.value, &other.value)))
    }

    pub fn inv(&self) -> Result<Elem> {
        Ok(self.field.elem(self.field.inv_value(&self.value)?))
    }

    pub fn div(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(self.field.elem(self.field.pow_value(&base.value, e.unsigned_abs())))
    }

    pub fn square(&self) -> Elem {
        self * self
    }

    /// Zero test. For p-adic values this is "no significant digit survives":
    /// both the exact zero and `O(p^k)` answer true.
    pub fn is_zero(&self) -> bool {
        self.field.is_zero_value(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.field.eq_values(&self.value, &self.field.one_value())
    }

    pub fn is_exact(&self) -> bool {
        match &self.value {
            Value::PAdic(x) => x.is_exact_zero(),
            _ => true,
        }
    }

    /// Equality with an exactness flag. Exact fields always compare
    /// exactly; p-adic comparisons are to the available precision and fail
    /// with `PrecisionExhausted` when no digit of either side is known.
    pub fn compare(&self, other: &Elem) -> Result<Comparison> {
        self.same_field(other)?;
        if !self.field.is_padic() {
            return Ok(Comparison { equal: self == other, exact: true });
        }
        let diff = self.try_sub(other)?;
        let Value::PAdic(d) = &diff.value else { unreachable!() };
        match d {
            PAdic::Exact0 => Ok(Comparison { equal: true, exact: true }),
            PAdic::Unit { .. } => Ok(Comparison { equal: false, exact: false }),
            PAdic::Zero { abs } => {
                let floor = [self, other]
                    .iter()
                    .filter_map(|x| match &x.value {
                        Value::PAdic(PAdic::Unit { val, .. }) => Some(*val),
                        _ => None,
                    })
                    .min();
                match floor {
                    Some(v) if *abs > v => Ok(Comparison { equal: true, exact: false }),
                    _ => Err(Error::PrecisionExhausted(format!(
                        "comparison of {self} and {other} has no significant digits"
                    ))),
                }
            }
        }
    }

    /// Relative precision of a p-adic value (`None` for exact values).
    pub fn precision(&self) -> Option<u32> {
        match &self.value {
            Value::PAdic(x) => x
                .rel_precision()
                .filter(|_| !x.is_exact_zero()),
            _ => None,
        }
    }

    pub fn padic(&self) -> Option<&PAdic> {
        match &self.value {
            Value::PAdic(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// The rational value of an element lying in the rational subfield of
    /// a quadratic tower over `Q`.
    pub fn rational_part(&self) -> Option<BigRational> {
        match (self.field.kind(), &self.value) {
            (FieldKind::Rationals, Value::Rational(r)) => Some(r.clone()),
            (FieldKind::QuadExt { base, .. }, Value::Quad(ab)) => {
                if !base.is_zero_value(&ab.1) {
                    return None;
                }
                base.elem(ab.0.clone()).rational_part()
            }
            _ => None,
        }
    }

    /// A rational with small numerator and denominator equal to `self`:
    /// the rational part in quadratic towers over `Q`, and for p-adic
    /// values the rational reconstruction of the known digits.
    pub fn small_rational(&self) -> Option<BigRational> {
        let FieldKind::PAdic { p, .. } = self.field.kind() else {
            return self.rational_part();
        };
        let x = self.padic()?;
        let PAdic::Unit { val, rel, .. } = x else {
            return x.is_exact_zero().then(BigRational::zero);
        };
        let pb = BigInt::from(*p);
        let modulus = num_traits::pow(pb.clone(), *rel as usize);
        // numerator and denominator below sqrt(p^rel / 2) are unique
        let bound = (&modulus / BigInt::from(2)).sqrt();
        for d in 1..=64u64 {
            if d % p == 0 {
                continue;
            }
            let w = (self * &self.field.int(d as i64)).padic()?.unit_mod(&pb, *rel)?;
            let r = if w > &modulus / BigInt::from(2) { w - &modulus } else { w };
            if r.abs() * BigInt::from(d) < bound {
                let scale = BigRational::from_integer(pb.clone()).pow(*val as i32);
                return Some(BigRational::new(r, BigInt::from(d)) * scale);
            }
        }
        None
    }

    /// Components `(a, b)` of `a + b*sqrt(d)` in a quadratic extension.
    pub fn quad_parts(&self) -> Option<(Elem, Elem)> {
        match (self.field.kind(), &self.value) {
            (FieldKind::QuadExt { base, .. }, Value::Quad(ab)) => {
                Some((base.elem(ab.0.clone()), base.elem(ab.1.clone())))
            }
            _ => None,
        }
    }

    /// Base-`p` encoding of a finite-field element.
    pub fn index(&self) -> Option<u64> {
        match (self.field.kind(), &self.value) {
            (FieldKind::PrimeField { .. }, Value::Residue(r)) => Some(*r),
            (FieldKind::GaloisField { p, .. }, Value::Poly(c)) => {
                Some(c.iter().rev().fold(0u64, |acc, &x| acc * p + x))
            }
            _ => None,
        }
    }

    /// Sign under the real embedding; `None` for fields without one.
    pub fn sign(&self) -> Option<i32> {
        match (self.field.kind(), &self.value) {
            (FieldKind::Rationals, Value::Rational(r)) => Some(if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }),
            (FieldKind::QuadExt { base, d, real: true }, Value::Quad(ab)) => {
                let a = base.elem(ab.0.clone());
                let b = base.elem(ab.1.clone());
                let sa = a.sign()?;
                let sb = b.sign()?;
                if sb == 0 || sa == sb {
                    return Some(if sa == 0 { sb } else { sa });
                }
                if sa == 0 {
                    return Some(sb);
                }
                // signs disagree: compare a^2 with d b^2
                let t = (&a.square() - &(d * &b.square())).sign()?;
                Some(if t > 0 { sa } else { sb })
            }
            _ => None,
        }
    }

    /// The `+/-` representative this library treats as positive: the
    /// positive one under a real embedding, otherwise the one with the
    /// smaller canonical encoding.
    pub fn is_positive_like(&self) -> bool {
        if let Some(s) = self.sign() {
            return s >= 0;
        }
        match (self.field.kind(), &self.value) {
            (FieldKind::PrimeField { p }, Value::Residue(r)) => *r <= p / 2,
            (FieldKind::GaloisField { .. }, _) => {
                self.index().unwrap() <= (-self).index().unwrap()
            }
            (FieldKind::PAdic { p, .. }, Value::PAdic(x)) => match x.unit_mod(&BigInt::from(*p), 1) {
                Some(r) => r <= BigInt::from((p - 1) / 2),
                None => true,
            },
            (FieldKind::QuadExt { .. }, _) => {
                let (a, b) = self.quad_parts().unwrap();
                if a.is_zero() {
                    b.is_positive_like()
                } else {
                    a.is_positive_like()
                }
            }
            (FieldKind::RationalFunctionField { p }, Value::RatFn(nd)) => {
                nd.0.last().is_none_or(|&c| c <= p / 2)
            }
            _ => true,
        }
    }
}

/// Outcome of [`Elem::compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    /// `false` when the answer only holds to the stored p-adic precision.
    pub exact: bool,
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.field.eq_values(&self.value, &other.value)
    }
}
impl Eq for Elem {}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        fn go<H: Hasher>(v: &Value, state: &mut H) {
            std::mem::discriminant(v).hash(state);
            match v {
                Value::Rational(r) => r.hash(state),
                Value::Residue(r) => r.hash(state),
                Value::Poly(c) => c.hash(state),
                // p-adic equality is approximate; only the kind is hashed
                Value::PAdic(_) => {}
                Value::Quad(ab) => {
                    go(&ab.0, state);
                    go(&ab.1, state);
                }
                Value::RatFn(nd) => nd.hash(state),
            }
        }
        go(&self.value, state);
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                self.$try(rhs).expect("arithmetic between different fields")
            }
        }
        impl $trait<Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                (&self).$method(rhs)
            }
        }
        impl $trait<Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.field.elem(self.field.neg_value(&self.value))
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", parse::format_value(&self.field, &self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let q = Field::rationals();
        let x = q.ratio(2, 3).unwrap();
        let y = q.ratio(1, 6).unwrap();
        assert_eq!(&x + &y, q.ratio(5, 6).unwrap());
        assert_eq!(x.div(&y).unwrap(), q.int(4));
        assert_eq!(q.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        assert_eq!(&f.int(3) * &f.int(4), f.int(2));
        assert_eq!(f.int(3).inv().unwrap(), f.int(2));
        assert_eq!(-&f.int(1), f.int(4));
    }

    #[test]
    fn galois_field_inverses() {
        for q in [4u64, 8, 9, 25, 27] {
            let f = Field::finite(q).unwrap();
            let els = f.elements().unwrap();
            assert_eq!(els.len() as u64, q);
            for x in els.iter().skip(1) {
                assert!((x * &x.inv().unwrap()).is_one(), "{x} in {f}");
            }
        }
        let f9 = Field::finite(9).unwrap();
        assert_eq!(f9.to_string(), "F9[1,0,1]");
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = Field::prime(5).unwrap().int(1);
        let b = Field::prime(7).unwrap().int(1);
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn galois_modulus_is_validated() {
        assert!(Field::galois_with_modulus(5, vec![1, 0, 1]).is_err());
        assert!(Field::galois_with_modulus(3, vec![1, 0, 1]).is_ok());
        assert!(Field::galois_with_modulus(3, vec![1, 0, 2]).is_err());
    }

    #[test]
    fn quadratic_extension_arithmetic() {
        let q = Field::rationals();
        let k = Field::quad_ext(&q, &q.int(5)).unwrap();
        let r = k.generator().unwrap();
        assert_eq!(r.square(), k.int(5));
        let x = &k.int(3) + &r;
        assert!((&x * &x.inv().unwrap()).is_one());
        assert_eq!((&r - &k.int(3)).sign(), Some(-1));
        assert_eq!((&r - &k.int(2)).sign(), Some(1));
        assert!(Field::quad_ext(&q, &q.int(4)).is_err());
    }

    #[test]
    fn padic_inverse_of_p() {
        let k = Field::padic(3, 5).unwrap();
        let inv = k.int(3).inv().unwrap();
        match inv.padic().unwrap() {
            PAdic::Unit { val, unit, rel } => {
                assert_eq!((*val, unit.clone(), *rel), (-1, BigInt::one(), 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn padic_comparison_flags() {
        let k = Field::padic(5, 10).unwrap();
        let x = k.ratio(7, 3).unwrap();
        let c = x.compare(&x.clone()).unwrap();
        assert!(c.equal);
        let y = &x - &x;
        assert!(y.is_zero());
        assert!(!y.is_exact());
        assert!(matches!(y.compare(&k.zero()), Err(Error::PrecisionExhausted(_))));
    }
}
