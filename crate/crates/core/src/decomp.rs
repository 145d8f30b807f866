//! Constructive factorizations `g = h q u` with `h` in `H`, `q` in `Q~`
//! and `u` in `U`, their reorderings, and the characteristic 2 variants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, FieldKind};
use crate::involution::{in_unipotent, is_f3, Involution, InvolutionKind};
use crate::mat2::{bruhat_factor, BruhatForm, Mat2};
use crate::verdict::MembershipVerdict;

/// Order of the factors. `HWQ` is the characteristic 2 form `h w q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorOrder {
    HQU,
    HUQ,
    QHU,
    QUH,
    UHQ,
    UQH,
    HWQ,
}

impl FactorOrder {
    pub const SIX: [FactorOrder; 6] = [
        FactorOrder::HQU,
        FactorOrder::HUQ,
        FactorOrder::QHU,
        FactorOrder::QUH,
        FactorOrder::UHQ,
        FactorOrder::UQH,
    ];
}

impl fmt::Display for FactorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FactorOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "HQU" => FactorOrder::HQU,
            "HUQ" => FactorOrder::HUQ,
            "QHU" => FactorOrder::QHU,
            "QUH" => FactorOrder::QUH,
            "UHQ" => FactorOrder::UHQ,
            "UQH" => FactorOrder::UQH,
            "HWQ" => FactorOrder::HWQ,
            _ => return Err(Error::Parse(format!("unknown factor order {s:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    BorelCase,
    BigCellAlphaNonzero,
    BigCellAlphaZero,
    F3Degenerate,
    Char2Finite,
    Char2Infinite,
    Reordered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompResult {
    pub h: Mat2,
    pub w: Mat2,
    pub q: Mat2,
    pub u: Mat2,
    pub order: FactorOrder,
    pub branch: Branch,
}

impl DecompResult {
    pub fn factors(&self) -> Vec<&Mat2> {
        let (h, q, u) = (&self.h, &self.q, &self.u);
        match self.order {
            FactorOrder::HQU => vec![h, q, u],
            FactorOrder::HUQ => vec![h, u, q],
            FactorOrder::QHU => vec![q, h, u],
            FactorOrder::QUH => vec![q, u, h],
            FactorOrder::UHQ => vec![u, h, q],
            FactorOrder::UQH => vec![u, q, h],
            FactorOrder::HWQ => vec![h, &self.w, q],
        }
    }

    pub fn product(&self) -> Mat2 {
        Mat2::product(self.h.field(), self.factors())
    }

    /// Memberships of every factor and the product identity.
    pub fn validate(&self, g: &Mat2, inv: &Involution) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::PostconditionViolation(format!(
                "{what} fails for {g} under {inv} ({:?})",
                self.branch
            )))
        };
        if !inv.in_fixed_group(&self.h) {
            return fail("h in H");
        }
        if !inv.in_extended_symmetric(&self.q) {
            return fail("q in Q~");
        }
        if !in_unipotent(&self.u) {
            return fail("u in U");
        }
        let f = g.field();
        let weyl2 = Mat2::from_ints(f, [[0, 1], [1, 0]]);
        if !self.w.is_identity() && self.w != weyl2 {
            return fail("w in {Id, Weyl}");
        }
        if self.product() != *g {
            return fail("product");
        }
        Ok(())
    }
}

fn require_odd(inv: &Involution) -> Result<&Elem> {
    if inv.field().characteristic() == 2 {
        return Err(Error::Unsupported(
            "characteristic 2 uses decompose_char2_finite or decompose_char2_infinite".into(),
        ));
    }
    inv.m_or_err()
}

fn result(h: Mat2, q: Mat2, u: Mat2, order: FactorOrder, branch: Branch) -> DecompResult {
    let w = Mat2::identity(h.field());
    DecompResult { h, w, q, u, order, branch }
}

/// `u1` of the `alpha != 0` branch, in the Bruhat parameters.
pub fn alpha_nonzero_u1(m: &Elem, a: &Elem, alpha: &Elem, b: &Elem, beta: &Elem) -> Result<Elem> {
    let num = &(&(m * &a.square()) - &b.square()) - &(&(&(m * alpha) * beta) * &(a * b));
    let den = &(&(m * alpha) * a) * &b.square();
    num.div(&den)
}

/// `u1` of the `alpha = 0` branch for the fixed point `[[a1, b1], [m b1, a1]]`.
pub fn alpha_zero_u1(
    m: &Elem,
    a1: &Elem,
    b1: &Elem,
    a: &Elem,
    b: &Elem,
    beta: &Elem,
) -> Result<Elem> {
    let num = &(&(&(m * a1) * &a.square()) - &(&b.square() * a1)) - &(&(&(m * b1) * beta) * b);
    let den = &(m * &b.square()) * b1;
    num.div(&den)
}

/// The `u1` making `y u(u1)` lie in `Q~`, from `e21 = -m e12` directly:
/// `u1 = -(y21 + m y12) / (m y11)`. Algebraically equal to both closed
/// forms above once `det y = 1` is used, but with a single cancellation,
/// which matters for p-adic precision.
fn reduced_u1(m: &Elem, y: &Mat2) -> Result<Elem> {
    let num = -(y.e21() + &(m * y.e12()));
    num.div(&(m * y.e11()))
}

/// Number of fixed points tried by the `alpha = 0` branch before giving up.
const FIXED_POINT_RETRIES: usize = 8;

/// `g = h q u`.
pub fn decompose_hqu(g: &Mat2, inv: &Involution) -> Result<DecompResult> {
    g.require_sl2()?;
    let m = require_odd(inv)?;
    let f = g.field();
    let id = Mat2::identity(f);
    let out = match bruhat_factor(g)? {
        BruhatForm::Borel { .. } => {
            let q = Mat2::diag(g.e11(), g.e22());
            let u = Mat2::unipotent(&g.e12().div(g.e11())?);
            result(id, q, u, FactorOrder::HQU, Branch::BorelCase)
        }
        BruhatForm::BigCell { alpha, .. } if !alpha.is_zero() => {
            let u1 = reduced_u1(m, g)?;
            let u0 = Mat2::unipotent(&u1);
            let q = g.mul(&u0);
            result(id, q, u0.inv()?, FactorOrder::HQU, Branch::BigCellAlphaNonzero)
        }
        BruhatForm::BigCell { .. } => {
            if is_f3(f) && inv.m_is_square()? {
                let r = result(id.clone(), g.clone(), id, FactorOrder::HQU, Branch::F3Degenerate);
                r.validate(g, inv)?;
                return Ok(r);
            }
            let mut last = None;
            for h0 in inv.fixed_point_candidates(FIXED_POINT_RETRIES)? {
                let y = h0.mul(g);
                let u0 = Mat2::unipotent(&reduced_u1(m, &y)?);
                let q = y.mul(&u0);
                let r = result(h0.inv()?, q, u0.inv()?, FactorOrder::HQU, Branch::BigCellAlphaZero);
                match r.validate(g, inv) {
                    Ok(()) => return Ok(r),
                    Err(e) => last = Some(e),
                }
            }
            return Err(last.unwrap_or(Error::OnlyCentralFixedPoints));
        }
    };
    out.validate(g, inv)?;
    Ok(out)
}

/// Decide `g` in `H Q~`. The `Q~` pattern on `h^-1 g` is the line
/// `a (z + m y) = b m (x + w)` in the parameters of `h`; it meets the conic
/// `a^2 - m b^2 = 1` iff `D = (m (x + w))^2 - m (z + m y)^2` is a nonzero
/// square (or the line is degenerate).
pub fn requires_unipotent(g: &Mat2, inv: &Involution) -> Result<MembershipVerdict<Mat2>> {
    g.require_sl2()?;
    let m = require_odd(inv)?;
    let f = g.field();
    let [x, y, z, w] = g.entries();
    let a_coef = z + &(m * y);
    let b_coef = m * &(x + w);
    if a_coef.is_zero() {
        return Ok(MembershipVerdict::Yes(Mat2::identity(f)));
    }
    let d = &b_coef.square() - &(m * &a_coef.square());
    if d.is_zero() {
        return Ok(MembershipVerdict::No("discriminant (m(x+w))^2 - m(z+my)^2 = 0".to_string()));
    }
    let Some(s) = d.sqrt()? else {
        return Ok(MembershipVerdict::No(format!(
            "discriminant (m(x+w))^2 - m(z+my)^2 = {d} is not a square"
        )));
    };
    let a = b_coef.div(&s)?;
    let b = a_coef.div(&s)?;
    let h = Mat2::from_parts(a.clone(), b.clone(), m * &b, a);
    let rest = h.inv()?.mul(g);
    if !inv.in_fixed_group(&h) || !inv.in_extended_symmetric(&rest) {
        return Err(Error::PostconditionViolation(format!("H Q~ witness for {g}")));
    }
    Ok(MembershipVerdict::Yes(h))
}

/// Decide `g` in `H U`: the factor `h` is forced to `a = e11`,
/// `b = e21 / m`.
pub fn decompose_hu(g: &Mat2, inv: &Involution) -> Result<MembershipVerdict<(Mat2, Mat2)>> {
    g.require_sl2()?;
    let m = require_odd(inv)?;
    let a = g.e11().clone();
    let b = g.e21().div(m)?;
    let norm = &a.square() - &(m * &b.square());
    if !norm.is_one() {
        return Ok(MembershipVerdict::No(format!(
            "h = [[{a},{b}],[m*{b},{a}]] has a^2 - m b^2 = {norm} != 1"
        )));
    }
    let h = Mat2::from_parts(a.clone(), b.clone(), m * &b, a);
    let u = h.inv()?.mul(g);
    if !in_unipotent(&u) {
        return Ok(MembershipVerdict::No(format!("h^-1 g = {u} is not unipotent")));
    }
    Ok(MembershipVerdict::Yes((h, u)))
}

/// `g = q u h`, solving `g h u' = q` for `u'` directly.
fn decompose_quh(g: &Mat2, inv: &Involution) -> Result<DecompResult> {
    g.require_sl2()?;
    let m = require_odd(inv)?;
    let f = g.field();
    let id = Mat2::identity(f);
    let mut hs = vec![id.clone()];
    if g.e11().is_zero() {
        hs = match inv.fixed_point_candidates(FIXED_POINT_RETRIES) {
            Ok(c) => c,
            Err(Error::OnlyCentralFixedPoints) => vec![],
            Err(e) => return Err(e),
        };
    }
    for h in &hs {
        let x = g.mul(h);
        if x.e11().is_zero() {
            continue;
        }
        let s = -(x.e21() + &(m * x.e12())).div(&(m * x.e11()))?;
        let us = Mat2::unipotent(&s);
        let q = x.mul(&us);
        let r = result(h.inv()?, q, us.inv()?, FactorOrder::QUH, Branch::Reordered);
        if r.validate(g, inv).is_ok() {
            return Ok(r);
        }
    }
    let r = result(id.clone(), g.clone(), id, FactorOrder::QUH, Branch::F3Degenerate);
    r.validate(g, inv)?;
    Ok(r)
}

fn inverted(r: DecompResult, order: FactorOrder) -> Result<DecompResult> {
    Ok(DecompResult {
        h: r.h.inv()?,
        w: r.w,
        q: r.q.inv()?,
        u: r.u.inv()?,
        order,
        branch: Branch::Reordered,
    })
}

/// Factors of `g` in the requested order.
pub fn decompose_reordered(g: &Mat2, inv: &Involution, order: FactorOrder) -> Result<DecompResult> {
    g.require_sl2()?;
    let out = match order {
        FactorOrder::HQU => return decompose_hqu(g, inv),
        FactorOrder::QUH => decompose_quh(g, inv)?,
        // g^-1 = q u h  =>  g = h^-1 u^-1 q^-1
        FactorOrder::HUQ => inverted(decompose_quh(&g.inv()?, inv)?, FactorOrder::HUQ)?,
        // g^-1 = h q u  =>  g = u^-1 q^-1 h^-1
        FactorOrder::UQH => inverted(decompose_hqu(&g.inv()?, inv)?, FactorOrder::UQH)?,
        // h q u = (h q h^-1) h u
        FactorOrder::QHU => {
            let r = decompose_hqu(g, inv)?;
            let q = r.h.mul(&r.q).mul(&r.h.inv()?);
            DecompResult { q, order, branch: Branch::Reordered, ..r }
        }
        // u q h = u h (h^-1 q h)
        FactorOrder::UHQ => {
            let r = decompose_reordered(g, inv, FactorOrder::UQH)?;
            let q = r.h.inv()?.mul(&r.q).mul(&r.h);
            DecompResult { q, order, branch: Branch::Reordered, ..r }
        }
        FactorOrder::HWQ => {
            return Err(Error::Unsupported("the h w q form is the characteristic 2 order".into()))
        }
    };
    out.validate(g, inv)?;
    Ok(out)
}

/// `g = h w q` over a finite field of characteristic 2 with `tau0`.
pub fn decompose_char2_finite(g: &Mat2, inv: &Involution) -> Result<DecompResult> {
    let f = g.field();
    if f.characteristic() != 2 {
        return Err(Error::NotChar2);
    }
    if *inv.kind() != InvolutionKind::TauZero {
        return Err(Error::KindMismatch);
    }
    g.require_sl2()?;
    let [a, b, c, d] = g.entries();
    let (h, w, q) = if !c.is_zero() {
        let h = Mat2::unipotent(&(&(a + c) + d).div(c)?);
        let q12 = (&(&f.one() + &(c * d)) + &d.square()).div(c)?;
        let q = Mat2::from_parts(c + d, q12, c.clone(), d.clone());
        (h, Mat2::identity(f), q)
    } else {
        let h = Mat2::unipotent(&(&a.square() + &(a * b)));
        let w = Mat2::from_ints(f, [[0, 1], [1, 0]]);
        let q = Mat2::from_parts(f.zero(), a.inv()?, a.clone(), a.clone());
        (h, w, q)
    };
    let r = DecompResult {
        h,
        w,
        q,
        u: Mat2::identity(f),
        order: FactorOrder::HWQ,
        branch: Branch::Char2Finite,
    };
    r.validate(g, inv)?;
    Ok(r)
}

/// Elements `[[a, b], [m b, a]]` of `H` with `a`, `b` polynomials of degree
/// below `deg` and `b != 0`, over `F_2(t)`.
fn char2_fixed_points(inv: &Involution, deg: u32) -> Result<Vec<Mat2>> {
    let f = inv.field();
    let m = inv.m_or_err()?;
    let t = f.generator()?;
    let polys: Vec<Elem> = (0..1u64 << deg)
        .map(|code| {
            (0..deg).filter(|i| code >> i & 1 == 1).fold(f.zero(), |acc, i| {
                &acc + &t.pow(i as i64).unwrap()
            })
        })
        .collect();
    let mut out = Vec::new();
    for a in &polys {
        for b in polys.iter().skip(1) {
            if (&a.square() + &(m * &b.square())).is_one() {
                out.push(Mat2::from_parts(a.clone(), b.clone(), m * b, a.clone()));
            }
        }
    }
    Ok(out)
}

/// Degree bound of the fixed-point search over `F_2(t)`.
pub const CHAR2_SEARCH_DEGREE: u32 = 4;

/// `g = h q u` over an infinite field of characteristic 2 with `tau_m`.
///
/// For `z = 0` the Borel split applies. For `z != 0` and `m` a square the
/// fixed point `[[0, b], [m b, 0]]` with `m b^2 = 1` and
/// `u = [[1, (x + w)/z], [0, 1]]` give `h g u` in `Q~`. Otherwise the
/// factors are searched among `h = Id` and the fixed points of bounded
/// degree; an exhausted search is `Undecided`.
pub fn decompose_char2_infinite(
    g: &Mat2,
    inv: &Involution,
) -> Result<MembershipVerdict<DecompResult>> {
    let f = g.field();
    if !matches!(f.kind(), FieldKind::RationalFunctionField { p: 2 }) {
        return Err(Error::NotChar2Infinite);
    }
    let m = inv.m_or_err()?;
    g.require_sl2()?;
    let [x, y, z, w] = g.entries();
    let id = Mat2::identity(f);
    let build = |h: Mat2, q: Mat2, u: Mat2| result(h, q, u, FactorOrder::HQU, Branch::Char2Infinite);
    if z.is_zero() {
        let r = build(id, Mat2::diag(x, w), Mat2::unipotent(&y.div(x)?));
        r.validate(g, inv)?;
        return Ok(MembershipVerdict::Yes(r));
    }
    if let Some(root) = m.sqrt()? {
        let b = root.inv()?;
        let h0 = Mat2::from_parts(f.zero(), b.clone(), m * &b, f.zero());
        let u0 = Mat2::unipotent(&(x + w).div(z)?);
        let r = build(h0.inv()?, h0.mul(g).mul(&u0), u0.inv()?);
        r.validate(g, inv)?;
        return Ok(MembershipVerdict::Yes(r));
    }
    let mut hs = vec![id];
    hs.extend(char2_fixed_points(inv, CHAR2_SEARCH_DEGREE)?);
    let tried = hs.len();
    for h in hs {
        let xg = h.mul(g);
        if xg.e11().is_zero() {
            continue;
        }
        let s = (xg.e21().div(m)? + xg.e12()).div(xg.e11())?;
        let us = Mat2::unipotent(&s);
        let r = build(h.inv()?, xg.mul(&us), us.inv()?);
        if r.validate(g, inv).is_ok() {
            return Ok(MembershipVerdict::Yes(r));
        }
    }
    Ok(MembershipVerdict::Undecided(format!(
        "m = {m} is not a square; searched {tried} elements of H with entries of degree < {CHAR2_SEARCH_DEGREE}"
    )))
}

/// Dispatch on characteristic and involution kind.
pub fn decompose(g: &Mat2, inv: &Involution, order: FactorOrder) -> Result<MembershipVerdict<DecompResult>> {
    let f: &Field = g.field();
    if f.characteristic() == 2 {
        return match inv.kind() {
            InvolutionKind::TauZero => Ok(MembershipVerdict::Yes(decompose_char2_finite(g, inv)?)),
            InvolutionKind::TauM(_) => decompose_char2_infinite(g, inv),
        };
    }
    Ok(MembershipVerdict::Yes(decompose_reordered(g, inv, order)?))
}
