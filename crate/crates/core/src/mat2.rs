//! 2x2 matrices over a [`Field`], Bruhat factorization and semisimplicity.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fields::{parse_elem, split_top, Elem, Field};

#[derive(Clone, Debug)]
pub struct Mat2 {
    e: [Elem; 4],
    det: Elem,
}

impl Mat2 {
    pub fn new(e11: Elem, e12: Elem, e21: Elem, e22: Elem) -> Result<Mat2> {
        let f = e11.field().clone();
        for x in [&e12, &e21, &e22] {
            if x.field() != &f {
                return Err(Error::FieldMismatch(format!("{} vs {}", x.field(), f)));
            }
        }
        let det = &(&e11 * &e22) - &(&e12 * &e21);
        Ok(Mat2 { e: [e11, e12, e21, e22], det })
    }

    /// Entries known to share a field.
    pub(crate) fn from_parts(e11: Elem, e12: Elem, e21: Elem, e22: Elem) -> Mat2 {
        Mat2::new(e11, e12, e21, e22).expect("entries share a field")
    }

    pub fn from_ints(field: &Field, rows: [[i64; 2]; 2]) -> Mat2 {
        let [[a, b], [c, d]] = rows;
        Mat2::from_parts(field.int(a), field.int(b), field.int(c), field.int(d))
    }

    pub fn identity(field: &Field) -> Mat2 {
        Mat2::from_ints(field, [[1, 0], [0, 1]])
    }

    pub fn diag(t: &Elem, s: &Elem) -> Mat2 {
        let z = t.field().zero();
        Mat2::from_parts(t.clone(), z.clone(), z, s.clone())
    }

    /// `[[1, x], [0, 1]]`.
    pub fn unipotent(x: &Elem) -> Mat2 {
        let f = x.field();
        Mat2::from_parts(f.one(), x.clone(), f.zero(), f.one())
    }

    /// The Weyl element `[[0, 1], [-1, 0]]`.
    pub fn omega(field: &Field) -> Mat2 {
        Mat2::from_ints(field, [[0, 1], [-1, 0]])
    }

    pub fn field(&self) -> &Field {
        self.e[0].field()
    }

    pub fn e11(&self) -> &Elem {
        &self.e[0]
    }
    pub fn e12(&self) -> &Elem {
        &self.e[1]
    }
    pub fn e21(&self) -> &Elem {
        &self.e[2]
    }
    pub fn e22(&self) -> &Elem {
        &self.e[3]
    }

    pub fn entries(&self) -> &[Elem; 4] {
        &self.e
    }

    pub fn det(&self) -> &Elem {
        &self.det
    }

    pub fn trace(&self) -> Elem {
        &self.e[0] + &self.e[3]
    }

    /// Discriminant of the characteristic polynomial, `tr^2 - 4 det`.
    pub fn char_poly_disc(&self) -> Elem {
        let f = self.field();
        &self.trace().square() - &(&f.int(4) * &self.det)
    }

    pub fn is_sl2(&self) -> bool {
        self.det.is_one()
    }

    pub fn is_gl2(&self) -> bool {
        !self.det.is_zero()
    }

    pub fn require_sl2(&self) -> Result<()> {
        if self.is_sl2() {
            Ok(())
        } else {
            Err(Error::NotSL2)
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.e[0].is_one()
    }

    pub fn is_scalar(&self) -> bool {
        self.e[1].is_zero() && self.e[2].is_zero() && self.e[0] == self.e[3]
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.e[2].is_zero()
    }

    pub fn try_mul(&self, o: &Mat2) -> Result<Mat2> {
        if self.field() != o.field() {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field(), o.field())));
        }
        let [a, b, c, d] = &self.e;
        let [w, x, y, z] = &o.e;
        Ok(Mat2::from_parts(
            &(a * w) + &(b * y),
            &(a * x) + &(b * z),
            &(c * w) + &(d * y),
            &(c * x) + &(d * z),
        ))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        self.try_mul(o).expect("matrices over different fields")
    }

    pub fn inv(&self) -> Result<Mat2> {
        if self.det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let di = self.det.inv()?;
        let [a, b, c, d] = &self.e;
        Ok(Mat2::from_parts(d * &di, -(b * &di), -(c * &di), a * &di))
    }

    pub fn neg(&self) -> Mat2 {
        let [a, b, c, d] = &self.e;
        Mat2::from_parts(-a, -b, -c, -d)
    }

    pub fn transpose(&self) -> Mat2 {
        let [a, b, c, d] = &self.e;
        Mat2::from_parts(a.clone(), c.clone(), b.clone(), d.clone())
    }

    pub fn scalar_mul(&self, s: &Elem) -> Result<Mat2> {
        let s = self.field().embed(s)?;
        let [a, b, c, d] = &self.e;
        Ok(Mat2::from_parts(a * &s, b * &s, c * &s, d * &s))
    }

    /// `self * o * self^-1`.
    pub fn conjugate(&self, o: &Mat2) -> Result<Mat2> {
        Ok(self.mul(o).mul(&self.inv()?))
    }

    /// Image of every entry in an extension field.
    pub fn embed(&self, field: &Field) -> Result<Mat2> {
        let [a, b, c, d] = &self.e;
        Mat2::new(field.embed(a)?, field.embed(b)?, field.embed(c)?, field.embed(d)?)
    }

    /// Multiply factors left to right.
    pub fn product<'a>(field: &Field, factors: impl IntoIterator<Item = &'a Mat2>) -> Mat2 {
        factors.into_iter().fold(Mat2::identity(field), |acc, m| acc.mul(m))
    }

    /// Smallest absolute p-adic precision among the entries, if any entry
    /// is inexact.
    pub fn min_abs_precision(&self) -> Option<i64> {
        self.e.iter().filter_map(|x| x.padic().and_then(|p| p.abs_precision())).min()
    }

    /// Smallest valuation of a nonzero p-adic entry.
    pub fn min_valuation(&self) -> Option<i64> {
        self.e
            .iter()
            .filter_map(|x| match x.padic() {
                Some(crate::fields::PAdic::Unit { val, .. }) => Some(*val),
                _ => None,
            })
            .min()
    }

    /// Digits of agreement between `self` and `other`: the absolute
    /// precision of the entrywise difference above the smallest valuation
    /// of `other`. `None` when both are exactly equal.
    pub fn agreement_digits(&self, other: &Mat2) -> Option<i64> {
        let mut worst: Option<i64> = None;
        let floor = other.min_valuation().unwrap_or(0);
        for (x, y) in self.e.iter().zip(other.e.iter()) {
            let d = x - y;
            let digits = match d.padic() {
                Some(crate::fields::PAdic::Exact0) | None => continue,
                Some(crate::fields::PAdic::Zero { abs }) => abs - floor,
                Some(crate::fields::PAdic::Unit { val, .. }) => val - floor,
            };
            worst = Some(worst.map_or(digits, |w| w.min(digits)));
        }
        worst
    }

    /// Sign-insensitive key for `{g, -g}` classes in `PSL2`.
    pub fn projective_key(&self) -> (Mat2, Mat2) {
        let n = self.neg();
        if format!("{self}") <= format!("{n}") {
            (self.clone(), n)
        } else {
            (n, self.clone())
        }
    }
}

impl PartialEq for Mat2 {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e
    }
}
impl Eq for Mat2 {}

impl Hash for Mat2 {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.e.hash(state);
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.e;
        write!(f, "{a},{b};{c},{d}")
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parse `"e11,e12;e21,e22"`.
pub fn parse_mat(field: &Field, text: &str) -> Result<Mat2> {
    let rows = split_top(text.trim(), ';');
    if rows.len() != 2 {
        return Err(Error::Parse(format!("expected two rows in {text:?}")));
    }
    let mut es = Vec::new();
    for r in rows {
        let cols = split_top(r, ',');
        if cols.len() != 2 {
            return Err(Error::Parse(format!("expected two entries in row {r:?}")));
        }
        for c in cols {
            es.push(parse_elem(field, c)?);
        }
    }
    let mut it = es.into_iter();
    let mut next = || it.next().unwrap();
    Mat2::new(next(), next(), next(), next())
}

// ---- Bruhat ----

/// `g = [[a, alpha], [0, 1/a]] * omega * [[b, beta], [0, 1/b]]` on the big
/// cell, `g = diag(t, 1/t) * [[1, u1], [0, 1]]` on the Borel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruhatForm {
    Borel { t: Elem, u1: Elem },
    BigCell { a: Elem, alpha: Elem, b: Elem, beta: Elem },
}

impl BruhatForm {
    pub fn reassemble(&self) -> Result<Mat2> {
        match self {
            BruhatForm::Borel { t, u1 } => Ok(Mat2::diag(t, &t.inv()?).mul(&Mat2::unipotent(u1))),
            BruhatForm::BigCell { a, alpha, b, beta } => {
                let f = a.field();
                let left = Mat2::from_parts(a.clone(), alpha.clone(), f.zero(), a.inv()?);
                let right = Mat2::from_parts(b.clone(), beta.clone(), f.zero(), b.inv()?);
                Ok(left.mul(&Mat2::omega(f)).mul(&right))
            }
        }
    }
}

/// Bruhat factorization of an `SL2` element with the torus gauge `a = 1`.
pub fn bruhat_factor(g: &Mat2) -> Result<BruhatForm> {
    g.require_sl2()?;
    let f = g.field();
    if g.e21().is_zero() {
        let t = g.e11().clone();
        let u1 = g.e12().div(&t)?;
        return Ok(BruhatForm::Borel { t, u1 });
    }
    Ok(BruhatForm::BigCell {
        a: f.one(),
        alpha: g.e11().div(g.e21())?,
        b: -g.e21(),
        beta: -g.e22(),
    })
}

/// Diagonalizable over the algebraic closure. In odd characteristic
/// `tr^2 != 4` or `g = +-Id`; in characteristic 2 `tr != 0` or `g = Id`.
pub fn is_semisimple(g: &Mat2) -> Result<bool> {
    g.require_sl2()?;
    if g.field().characteristic() == 2 {
        return Ok(!g.trace().is_zero() || g.is_identity());
    }
    Ok(!g.char_poly_disc().is_zero() || g.is_scalar())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn basic_ops() {
        let f = q();
        let u = Mat2::from_ints(&f, [[1, 1], [0, 1]]);
        assert_eq!(u.inv().unwrap(), Mat2::from_ints(&f, [[1, -1], [0, 1]]));
        let w = Mat2::omega(&f);
        assert_eq!(w.mul(&w), Mat2::identity(&f).neg());
        let g = parse_mat(&f, "2,3;0,1/2").unwrap();
        assert_eq!(g.inv().unwrap(), parse_mat(&f, "1/2,-3;0,2").unwrap());
        assert_eq!(Mat2::from_ints(&f, [[1, 2], [2, 4]]).inv(), Err(Error::SingularMatrix));
    }

    #[test]
    fn bruhat_examples() {
        let f = q();
        let g = parse_mat(&f, "2,3;0,1/2").unwrap();
        assert_eq!(
            bruhat_factor(&g).unwrap(),
            BruhatForm::Borel { t: f.int(2), u1: f.ratio(3, 2).unwrap() }
        );
        let g = parse_mat(&f, "-1,1;-1,0").unwrap();
        assert_eq!(
            bruhat_factor(&g).unwrap(),
            BruhatForm::BigCell { a: f.int(1), alpha: f.int(1), b: f.int(1), beta: f.int(0) }
        );
        let w = Mat2::omega(&f);
        let bf = bruhat_factor(&w).unwrap();
        assert_eq!(
            bf,
            BruhatForm::BigCell { a: f.int(1), alpha: f.int(0), b: f.int(1), beta: f.int(0) }
        );
        assert_eq!(bf.reassemble().unwrap(), w);
    }

    #[test]
    fn semisimplicity_and_disc() {
        let f = q();
        assert!(is_semisimple(&Mat2::identity(&f)).unwrap());
        assert!(is_semisimple(&Mat2::identity(&f).neg()).unwrap());
        assert!(!is_semisimple(&Mat2::from_ints(&f, [[1, 1], [0, 1]])).unwrap());
        let q19 = Mat2::from_ints(&f, [[3, 2], [-2, -1]]);
        assert!(!is_semisimple(&q19).unwrap());
        assert!(q19.char_poly_disc().is_zero());
        let d = Mat2::diag(&f.int(2), &f.ratio(1, 2).unwrap());
        assert_eq!(d.char_poly_disc(), f.ratio(9, 4).unwrap());
        assert!(Mat2::identity(&f).char_poly_disc().is_zero());
    }

    #[test]
    fn text_round_trip() {
        let f = Field::finite(9).unwrap();
        let g = parse_mat(&f, "[1,1],[0,1];[2],[1,2]").unwrap();
        assert_eq!(parse_mat(&f, &g.to_string()).unwrap(), g);
    }
}
