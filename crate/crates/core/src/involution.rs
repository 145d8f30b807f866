//! The involutions `tau_m = Inn([[0,1],[m,0]])` and, in characteristic 2,
//! `tau0 = Inn([[1,1],[0,1]])`, with the subgroups they cut out.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{parse_elem, Elem, Field, FieldKind, SquareClassRep};
use crate::mat2::Mat2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvolutionKind {
    TauM(Elem),
    TauZero,
}

#[derive(Clone, Debug)]
pub struct Involution {
    field: Field,
    kind: InvolutionKind,
    matrix: Mat2,
    square_class: Option<SquareClassRep>,
}

impl PartialEq for Involution {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.kind == other.kind
    }
}

/// `tau_m` over `field`. `m` is stored as given.
pub fn make_involution(field: &Field, m: &Elem) -> Result<Involution> {
    let m = field.embed(m)?;
    if m.is_zero() {
        return Err(Error::ZeroM);
    }
    if field.characteristic() == 2 && field.is_finite() {
        return Err(Error::CharTwoUnsupported);
    }
    if field.padic_prime() == Some(2) {
        return Err(Error::Unsupported("2-adic involutions".into()));
    }
    let f = field.clone();
    let matrix = Mat2::from_parts(f.zero(), f.one(), m.clone(), f.zero());
    Ok(Involution {
        field: f.clone(),
        square_class: f.square_class(&m).ok(),
        kind: InvolutionKind::TauM(m),
        matrix,
    })
}

/// `tau0` over a finite field of characteristic 2.
pub fn make_tau0(field: &Field) -> Result<Involution> {
    if field.characteristic() != 2 {
        return Err(Error::NotChar2);
    }
    if !field.is_finite() {
        return Err(Error::Unsupported("tau0 is used over finite fields".into()));
    }
    Ok(Involution {
        field: field.clone(),
        kind: InvolutionKind::TauZero,
        matrix: Mat2::from_ints(field, [[1, 1], [0, 1]]),
        square_class: None,
    })
}

/// Parse `"tau(m)"` or `"tau0"`.
pub fn parse_involution(field: &Field, text: &str) -> Result<Involution> {
    let t = text.trim();
    if t == "tau0" {
        return make_tau0(field);
    }
    let arg = t
        .strip_prefix("tau(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected tau(m) or tau0, got {t:?}")))?;
    make_involution(field, &parse_elem(field, arg)?)
}

impl Involution {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn kind(&self) -> &InvolutionKind {
        &self.kind
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn square_class(&self) -> Option<&SquareClassRep> {
        self.square_class.as_ref()
    }

    /// `m` for `tau_m`.
    pub fn m(&self) -> Option<&Elem> {
        match &self.kind {
            InvolutionKind::TauM(m) => Some(m),
            InvolutionKind::TauZero => None,
        }
    }

    pub(crate) fn m_or_err(&self) -> Result<&Elem> {
        self.m().ok_or(Error::KindMismatch)
    }

    /// Whether `m` is a square (so `H` contains a split torus).
    pub fn m_is_square(&self) -> Result<bool> {
        self.m_or_err()?.is_square()
    }

    /// The same involution over an extension field.
    pub fn extend(&self, field: &Field) -> Result<Involution> {
        match &self.kind {
            InvolutionKind::TauM(m) => make_involution(field, &field.embed(m)?),
            InvolutionKind::TauZero => make_tau0(field),
        }
    }

    fn check_field(&self, g: &Mat2) -> Result<()> {
        if g.field() != &self.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", g.field(), self.field)));
        }
        Ok(())
    }

    pub fn apply(&self, g: &Mat2) -> Result<Mat2> {
        self.check_field(g)?;
        match &self.kind {
            InvolutionKind::TauM(m) => {
                let [a, b, c, d] = g.entries();
                Ok(Mat2::from_parts(d.clone(), c.div(m)?, m * b, a.clone()))
            }
            InvolutionKind::TauZero => self.matrix.conjugate(g),
        }
    }

    /// `H`: fixed points of the involution in `SL2`.
    pub fn in_fixed_group(&self, g: &Mat2) -> bool {
        if g.field() != &self.field || !g.is_sl2() {
            return false;
        }
        match &self.kind {
            InvolutionKind::TauM(m) => g.e11() == g.e22() && *g.e21() == m * g.e12(),
            InvolutionKind::TauZero => g.e21().is_zero() && g.e11() == g.e22(),
        }
    }

    /// `Q~`: elements with `tau(g) = g^-1`, by the entry pattern.
    pub fn in_extended_symmetric(&self, g: &Mat2) -> bool {
        if g.field() != &self.field || !g.is_sl2() {
            return false;
        }
        match &self.kind {
            InvolutionKind::TauM(m) => *g.e21() == -(m * g.e12()),
            InvolutionKind::TauZero => *g.e22() == g.e11() + g.e21(),
        }
    }

    /// `Q~` by the defining identity `tau(g) g = Id`.
    pub fn in_extended_symmetric_direct(&self, g: &Mat2) -> bool {
        g.field() == &self.field
            && g.is_sl2()
            && self.apply(g).map(|t| t.mul(g).is_identity()).unwrap_or(false)
    }

    /// `g tau(g)^-1`, the point of the symmetric space `Q` attached to `g`.
    pub fn symmetric_image(&self, g: &Mat2) -> Result<Mat2> {
        Ok(g.mul(&self.apply(g)?.inv()?))
    }

    /// A fixed point other than `+-Id`, from the conic parametrization
    /// `a = (1 + m t^2)/(1 - m t^2)`, `b = 2t/(1 - m t^2)`.
    pub fn nontrivial_fixed_point(&self) -> Result<Mat2> {
        Ok(self.fixed_point_candidates(1)?.remove(0))
    }

    /// The first `count` fixed points with `b != 0` in parametrization
    /// order (fewer over small finite fields).
    pub fn fixed_point_candidates(&self, count: usize) -> Result<Vec<Mat2>> {
        let m = self.m_or_err()?;
        let f = &self.field;
        if f.characteristic() == 2 {
            return Err(Error::Unsupported("conic parametrization in characteristic 2".into()));
        }
        let mut out = Vec::new();
        let params: Box<dyn Iterator<Item = Elem>> = match f.order() {
            Some(q) => Box::new((1..q).map(|c| f.from_index(c))),
            None => Box::new((1..=10_000i64).map(|t| f.int(t))),
        };
        for t in params {
            let den = &f.one() - &(m * &t.square());
            if den.is_zero() {
                continue;
            }
            let a = (&f.one() + &(m * &t.square())).div(&den)?;
            let b = (&f.int(2) * &t).div(&den)?;
            if b.is_zero() {
                continue;
            }
            let h = Mat2::from_parts(a.clone(), b.clone(), m * &b, a);
            if !out.contains(&h) {
                out.push(h);
            }
            if out.len() >= count {
                return Ok(out);
            }
        }
        if let Some(q) = f.order() {
            // every point of the conic except (-1, 0) is hit above; keep a
            // direct scan so the result never depends on that argument
            for i in 0..q {
                for j in 1..q {
                    let (a, b) = (f.from_index(i), f.from_index(j));
                    if (&a.square() - &(m * &b.square())).is_one() {
                        let h = Mat2::from_parts(a.clone(), b.clone(), m * &b, a);
                        if !out.contains(&h) {
                            out.push(h);
                        }
                        if out.len() >= count {
                            return Ok(out);
                        }
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(Error::OnlyCentralFixedPoints);
        }
        Ok(out)
    }
}

pub fn in_unipotent(g: &Mat2) -> bool {
    g.e11().is_one() && g.e22().is_one() && g.e21().is_zero()
}

pub fn in_torus(g: &Mat2) -> bool {
    g.e12().is_zero() && g.e21().is_zero() && g.is_sl2()
}

pub fn in_borel(g: &Mat2) -> bool {
    g.e21().is_zero() && g.is_sl2()
}

/// Same field, both `tau_m`, and `m1 / m2` a square.
pub fn is_isomorphic(a: &Involution, b: &Involution) -> Result<bool> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(format!("{} vs {}", a.field, b.field)));
    }
    match (&a.kind, &b.kind) {
        (InvolutionKind::TauM(m1), InvolutionKind::TauM(m2)) => a.field.same_square_class(m1, m2),
        _ => Err(Error::KindMismatch),
    }
}

/// Normal form of `Inn(A)` with an explicit conjugator.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub involution: Involution,
    /// `chi` with `chi A chi^-1` a scalar multiple of `[[0,1],[m,0]]`.
    pub conjugator: Mat2,
}

/// Classify `Inn(A)` for `A` in `GL2` with `A^2` scalar and `A` not scalar.
///
/// Such an `A` is traceless, so `A^2 = -det(A) Id`. With `v` not an
/// eigenvector and `P = [v | Av]`, `P^-1 A P = [[0, -det A], [1, 0]]`;
/// swapping the basis and rescaling by `diag(1, s)^-1` with
/// `s^2 = -det(A)/m` brings it to `tau_m` for the class representative `m`.
pub fn involution_from_matrix(a: &Mat2) -> Result<NormalForm> {
    if !a.is_gl2() {
        return Err(Error::SingularMatrix);
    }
    if a.is_scalar() {
        return Err(Error::NotAnInvolution("A is scalar".into()));
    }
    let sq = a.mul(a);
    if !sq.is_scalar() {
        return Err(Error::NotAnInvolution("A^2 is not scalar".into()));
    }
    let f = a.field();
    let d0 = -a.det();
    let m = match f.square_class(&d0) {
        Ok(c) => c.rep,
        Err(_) => d0.clone(),
    };
    let p = [(1, 0), (0, 1), (1, 1)]
        .into_iter()
        .map(|(x, y)| {
            let (v0, v1) = (f.int(x), f.int(y));
            let av0 = &(a.e11() * &v0) + &(a.e12() * &v1);
            let av1 = &(a.e21() * &v0) + &(a.e22() * &v1);
            Mat2::from_parts(v0, av0, v1, av1)
        })
        .find(|p| p.is_gl2())
        .ok_or_else(|| Error::PostconditionViolation("no cyclic vector".into()))?;
    let swap = Mat2::from_ints(f, [[0, 1], [1, 0]]);
    let s = d0
        .div(&m)?
        .sqrt()?
        .ok_or_else(|| Error::PostconditionViolation("class ratio is not a square".into()))?;
    let rescale = Mat2::diag(&f.one(), &s).inv()?;
    let chi = rescale.mul(&swap).mul(&p.inv()?);
    let inv = if f.characteristic() == 2 && f.is_finite() {
        make_tau0(f)?
    } else {
        make_involution(f, &m)?
    };
    let x = chi.conjugate(a)?;
    let ok = match inv.kind() {
        InvolutionKind::TauM(m) => {
            x.e11().is_zero() && x.e22().is_zero() && *x.e21() == m * x.e12()
        }
        InvolutionKind::TauZero => true,
    };
    if !ok {
        return Err(Error::PostconditionViolation(format!("conjugator {chi} fails on {a}")));
    }
    Ok(NormalForm { involution: inv, conjugator: chi })
}

/// Exhaustive search over `GL2(F_q)` for `chi` with `chi A chi^-1`
/// proportional to `target`.
pub fn search_conjugator(a: &Mat2, target: &Mat2) -> Result<Option<Mat2>> {
    let f = a.field();
    let els = f.elements()?;
    for x in &els {
        for y in &els {
            for z in &els {
                for w in &els {
                    let chi = Mat2::from_parts(x.clone(), y.clone(), z.clone(), w.clone());
                    if !chi.is_gl2() {
                        continue;
                    }
                    let c = chi.conjugate(a)?;
                    // proportional: c = lambda * target
                    let cross = |i: usize, j: usize| {
                        &c.entries()[i] * &target.entries()[j]
                            == &c.entries()[j] * &target.entries()[i]
                    };
                    if (0..4).all(|i| (0..4).all(|j| cross(i, j))) {
                        return Ok(Some(chi));
                    }
                }
            }
        }
    }
    Ok(None)
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            InvolutionKind::TauM(m) => write!(f, "tau({m})"),
            InvolutionKind::TauZero => write!(f, "tau0"),
        }
    }
}

/// Whether a finite field is `F_3` (the only field where `H` can be
/// `{+-Id}` for square `m`).
pub(crate) fn is_f3(f: &Field) -> bool {
    matches!(f.kind(), FieldKind::PrimeField { p: 3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::SquareClassLabel;

    #[test]
    fn construction_and_classes() {
        let q = Field::rationals();
        let t = make_involution(&q, &q.int(-1)).unwrap();
        assert_eq!(t.square_class().unwrap().rep, q.int(-1));
        let f5 = Field::prime(5).unwrap();
        let t = make_involution(&f5, &f5.int(4)).unwrap();
        assert_eq!(t.square_class().unwrap().label, Some(SquareClassLabel::One));
        let q3 = Field::padic(3, 20).unwrap();
        let t = make_involution(&q3, &q3.int(6)).unwrap();
        assert_eq!(t.square_class().unwrap().rep, q3.int(-3));
        assert_eq!(make_involution(&q, &q.zero()).unwrap_err(), Error::ZeroM);
        let f4 = Field::finite(4).unwrap();
        assert_eq!(make_involution(&f4, &f4.one()).unwrap_err(), Error::CharTwoUnsupported);
    }

    #[test]
    fn apply_examples() {
        let q = Field::rationals();
        let t1 = make_involution(&q, &q.one()).unwrap();
        let d = Mat2::diag(&q.int(2), &q.ratio(1, 2).unwrap());
        assert_eq!(t1.apply(&d).unwrap(), Mat2::diag(&q.ratio(1, 2).unwrap(), &q.int(2)));
        assert_eq!(t1.apply(&Mat2::omega(&q)).unwrap(), Mat2::from_ints(&q, [[0, -1], [1, 0]]));
        let f2 = Field::prime(2).unwrap();
        let t0 = make_tau0(&f2).unwrap();
        let n = Mat2::from_ints(&f2, [[1, 1], [0, 1]]);
        assert_eq!(t0.apply(&n).unwrap(), n);
    }

    #[test]
    fn isomorphism() {
        let q = Field::rationals();
        let t = |m: i64| make_involution(&q, &q.int(m)).unwrap();
        assert!(is_isomorphic(&t(1), &t(4)).unwrap());
        assert!(!is_isomorphic(&t(1), &t(-1)).unwrap());
        let q3 = Field::padic(3, 20).unwrap();
        let a = make_involution(&q3, &q3.int(3)).unwrap();
        let b = make_involution(&q3, &q3.int(-3)).unwrap();
        assert!(!is_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn normal_forms() {
        let q = Field::rationals();
        let nf = involution_from_matrix(&Mat2::from_ints(&q, [[1, 0], [0, -1]])).unwrap();
        assert_eq!(nf.involution.m(), Some(&q.int(1)));
        let f5 = Field::prime(5).unwrap();
        let a = Mat2::from_ints(&f5, [[1, 2], [3, -1]]);
        let nf = involution_from_matrix(&a).unwrap();
        assert_eq!(nf.involution.m(), Some(&f5.int(2)));
        let found = search_conjugator(&a, nf.involution.matrix()).unwrap();
        assert!(found.is_some());
        assert!(matches!(
            involution_from_matrix(&Mat2::from_ints(&q, [[1, 1], [0, 1]])),
            Err(Error::NotAnInvolution(_))
        ));
    }

    #[test]
    fn fixed_points() {
        let q = Field::rationals();
        let t1 = make_involution(&q, &q.one()).unwrap();
        let h = t1.nontrivial_fixed_point().unwrap();
        assert_eq!(h, crate::mat2::parse_mat(&q, "-5/3,-4/3;-4/3,-5/3").unwrap());
        let f5 = Field::prime(5).unwrap();
        let t2 = make_involution(&f5, &f5.int(2)).unwrap();
        assert!(t2.in_fixed_group(&t2.nontrivial_fixed_point().unwrap()));
        let f3 = Field::prime(3).unwrap();
        let t = make_involution(&f3, &f3.one()).unwrap();
        assert_eq!(t.nontrivial_fixed_point().unwrap_err(), Error::OnlyCentralFixedPoints);
    }
}
