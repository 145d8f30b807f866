//! Exhaustive enumeration over finite fields and the claim harness.
//!
//! Every verdict is computed against brute-force set membership; the
//! closed forms under test are only ever compared with it.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{
    decompose_char2_finite, decompose_char2_infinite, decompose_hqu, decompose_reordered,
    FactorOrder,
};
use crate::error::{Error, Result};
use crate::fields::{parse_field, Elem, Field, FieldKind};
use crate::involution::{in_unipotent, make_involution, make_tau0, parse_involution, Involution};
use crate::mat2::{is_semisimple, parse_mat, Mat2};
use crate::symspace::{construct_nonsemisimple_in_q, q_equals_qtilde, random_qtilde, witness_in_q};
use crate::verdict::MembershipVerdict;

pub const DEFAULT_MAX_ENUM: u64 = 10_000_000;

/// Enumeration guard, overridable with `SL2_MAX_ENUM`.
pub fn max_enum() -> u64 {
    std::env::var("SL2_MAX_ENUM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM)
}

/// `SL2(F_q)` in lexicographic order of the entry encodings.
pub fn sl2_elements(field: &Field) -> Result<Vec<Mat2>> {
    let q = field
        .order()
        .ok_or_else(|| Error::Unsupported(format!("{field} is infinite")))?;
    let guard = max_enum();
    if q.checked_pow(3).is_none_or(|n| n > guard) {
        return Err(Error::TooLarge(format!("q^3 for q = {q} exceeds {guard}")));
    }
    let elems = field.elements()?;
    let one = field.one();
    let out = elems
        .par_iter()
        .flat_map_iter(|a| {
            let mut v = Vec::new();
            for b in &elems {
                if a.is_zero() {
                    if b.is_zero() {
                        continue;
                    }
                    let c = -(&b.inv().unwrap());
                    for d in &elems {
                        v.push(Mat2::new(a.clone(), b.clone(), c.clone(), d.clone()).unwrap());
                    }
                } else {
                    for c in &elems {
                        let d = (&one + &(b * c)).div(a).unwrap();
                        v.push(Mat2::new(a.clone(), b.clone(), c.clone(), d).unwrap());
                    }
                }
            }
            v
        })
        .collect();
    Ok(out)
}

/// The elements of `SL2(F_q)` satisfying `pred`, in enumeration order.
pub fn enumerate(field: &Field, pred: impl Fn(&Mat2) -> bool + Sync) -> Result<Vec<Mat2>> {
    Ok(sl2_elements(field)?.into_par_iter().filter(|g| pred(g)).collect())
}

/// Deterministic pseudo-random `SL2` elements as products of elementary
/// matrices with small entries.
///
/// Over `Q_p` the product is formed over `Q` and each entry embedded at
/// full precision, so every entry carries `N` significant digits.
pub fn random_sl2(field: &Field, count: usize, seed: u64) -> Result<Vec<Mat2>> {
    if field.is_padic() {
        return random_sl2(&Field::rationals(), count, seed)?
            .iter()
            .map(|g| {
                let e = g.entries().iter().map(|x| field.rational(x.as_rational().unwrap()));
                let e: Vec<Elem> = e.collect::<Result<_>>()?;
                Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone())
            })
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = |rng: &mut ChaCha8Rng| -> Result<Elem> {
        if let FieldKind::RationalFunctionField { .. } = field.kind() {
            let t = field.generator()?;
            let mut x = field.zero();
            let mut pw = field.one();
            for _ in 0..3 {
                x = &x + &(&field.int(rng.gen_range(0..2)) * &pw);
                pw = &pw * &t;
            }
            return Ok(x);
        }
        if field.is_finite() {
            return Ok(field.from_index(rng.gen_range(0..field.order().unwrap())));
        }
        field.ratio(rng.gen_range(-20..=20), rng.gen_range(1..=6))
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (a, b, c) = (small(&mut rng)?, small(&mut rng)?, small(&mut rng)?);
        let t = small(&mut rng)?;
        if t.is_zero() {
            continue;
        }
        let lower = Mat2::new(field.one(), field.zero(), b, field.one())?;
        let g = Mat2::unipotent(&a)
            .mul(&lower)
            .mul(&Mat2::unipotent(&c))
            .mul(&Mat2::diag(&t, &t.inv()?));
        out.push(g);
    }
    Ok(out)
}

// ---- the finite universe ----

/// `G`, `H`, `Q~`, `U`, `T` of one finite field and involution.
pub struct Universe {
    pub inv: Involution,
    pub g: Vec<Mat2>,
    pub h: Vec<Mat2>,
    pub qt: Vec<Mat2>,
    pub u: Vec<Mat2>,
    pub t: Vec<Mat2>,
    h_inv: Vec<Mat2>,
    u_inv: Vec<Mat2>,
}

/// `h`-, `q`-, ... products whose membership the harness can decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductSet {
    HU,
    HWU,
    QtU,
    HQt,
    QtH,
    HQtU,
    /// `H {Id, [[0,1],[1,0]]} Q~`, the characteristic 2 form.
    HWQt,
    Q,
}

impl Universe {
    pub fn new(inv: &Involution) -> Result<Universe> {
        let f = inv.field();
        let g = sl2_elements(f)?;
        let h: Vec<Mat2> = g.iter().filter(|x| inv.in_fixed_group(x)).cloned().collect();
        let qt: Vec<Mat2> = g.iter().filter(|x| inv.in_extended_symmetric(x)).cloned().collect();
        let u: Vec<Mat2> = g.iter().filter(|x| in_unipotent(x)).cloned().collect();
        let t: Vec<Mat2> = g.iter().filter(|x| x.e12().is_zero() && x.e21().is_zero()).cloned().collect();
        let h_inv = h.iter().map(|x| x.inv()).collect::<Result<_>>()?;
        let u_inv = u.iter().map(|x| x.inv()).collect::<Result<_>>()?;
        Ok(Universe { inv: inv.clone(), g, h, qt, u, t, h_inv, u_inv })
    }

    pub fn field(&self) -> &Field {
        self.inv.field()
    }

    fn in_qt(&self, x: &Mat2) -> bool {
        self.inv.in_extended_symmetric(x)
    }

    /// Brute-force membership of `x` in a product set.
    pub fn contains(&self, set: ProductSet, x: &Mat2) -> Result<bool> {
        Ok(match set {
            ProductSet::HU => self.h_inv.iter().any(|hi| in_unipotent(&hi.mul(x))),
            ProductSet::HWU => {
                let w = Mat2::omega(self.field()).inv()?;
                self.h_inv.iter().any(|hi| {
                    let y = hi.mul(x);
                    in_unipotent(&y) || in_unipotent(&w.mul(&y))
                })
            }
            ProductSet::QtU => self.u_inv.iter().any(|ui| self.in_qt(&x.mul(ui))),
            ProductSet::HQt => self.h_inv.iter().any(|hi| self.in_qt(&hi.mul(x))),
            ProductSet::QtH => self.h_inv.iter().any(|hi| self.in_qt(&x.mul(hi))),
            ProductSet::HQtU => self.h_inv.iter().any(|hi| {
                let y = hi.mul(x);
                self.u_inv.iter().any(|ui| self.in_qt(&y.mul(ui)))
            }),
            ProductSet::HWQt => {
                let w = Mat2::from_ints(self.field(), [[0, 1], [1, 0]]);
                self.h_inv.iter().any(|hi| {
                    let y = hi.mul(x);
                    self.in_qt(&y) || self.in_qt(&w.mul(&y))
                })
            }
            ProductSet::Q => self.g.iter().any(|g| self.inv.symmetric_image(g).is_ok_and(|y| y == *x)),
        })
    }

    /// Distinct elements of `A B C` for listed factor sets.
    fn product_set(&self, parts: &[&[Mat2]]) -> HashSet<Mat2> {
        let mut acc: HashSet<Mat2> = [Mat2::identity(self.field())].into_iter().collect();
        for part in parts {
            acc = acc
                .par_iter()
                .flat_map_iter(|a| part.iter().map(move |b| a.mul(b)))
                .collect();
        }
        acc
    }

    fn symmetric_image(&self) -> Result<HashSet<Mat2>> {
        self.g.par_iter().map(|g| self.inv.symmetric_image(g)).collect()
    }

    fn m(&self) -> Option<&Elem> {
        self.inv.m()
    }

    /// Parameter pairs `(a, b)` of `H`.
    fn h_params(&self) -> Vec<(Elem, Elem)> {
        self.h.iter().map(|h| (h.e11().clone(), h.e12().clone())).collect()
    }
}

fn first_missing<'a>(all: &'a [Mat2], set: &HashSet<Mat2>) -> Option<&'a Mat2> {
    all.iter().find(|x| !set.contains(*x))
}

// ---- claims ----

/// Intersections with a closed form under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Intersection {
    HQtCapU,
    HCapQtU,
    HUCapQt,
    HCapQt,
    UCapH,
    UCapQt,
}

/// The fact a counterexample demonstrates, re-checkable by [`replay`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fact")]
pub enum Fact {
    /// The matrix lies in `Q~` but not in `Q`.
    NotInSymmetricSpace,
    NotInProduct { set: ProductSet },
    /// In the closed form but not in the intersection.
    FormulaOnly { set: Intersection },
    /// In the intersection but missing from the closed form (for the
    /// `+-Id` intersections: an element other than `+-Id`).
    SetOnly { set: Intersection },
    NotSemisimple,
    /// Every element of `Q~` is semisimple although `m` is a square.
    AllSemisimple,
    /// `subset` is (or is not) contained in `superset`, contradicting the
    /// stated equivalence.
    Containment { subset: String, superset: ProductSet, holds: bool },
    CountMismatch { name: String, stated: usize, computed: usize },
    Undecomposable { order: FactorOrder },
    /// Char 2, `m` a non-square: `H = {Id}` and `g u` never has the
    /// `Q~` pattern.
    OutsideHQtUChar2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub field: String,
    pub involution: String,
    pub matrix: Option<String>,
    #[serde(flatten)]
    pub fact: Fact,
    pub note: String,
}

fn inv_spec(inv: &Involution) -> String {
    match inv.m() {
        Some(m) => match m.small_rational() {
            Some(r) => format!("tau({r})"),
            None => format!("tau({m})"),
        },
        None => "tau0".into(),
    }
}

/// Matrix text that parses back in the field: rational entries print as
/// rationals even over `Q_p`.
pub fn mat_spec(g: &Mat2) -> String {
    let parts: Option<Vec<String>> = g
        .entries()
        .iter()
        .map(|e| {
            if e.is_zero() {
                return Some("0".to_string());
            }
            e.small_rational().map(|r| r.to_string())
        })
        .collect();
    match parts {
        Some(p) if g.field().is_padic() => format!("{},{};{},{}", p[0], p[1], p[2], p[3]),
        _ => g.to_string(),
    }
}

impl Counterexample {
    pub fn new(inv: &Involution, g: &Mat2, fact: Fact, note: &str) -> Counterexample {
        Counterexample {
            field: inv.field().to_string(),
            involution: inv_spec(inv),
            matrix: Some(mat_spec(g)),
            fact,
            note: note.to_string(),
        }
    }

    pub fn without_matrix(inv: &Involution, fact: Fact, note: &str) -> Counterexample {
        Counterexample {
            field: inv.field().to_string(),
            involution: inv_spec(inv),
            matrix: None,
            fact,
            note: note.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum ClaimVerdict {
    Confirmed { detail: String },
    Refuted { counterexample: Counterexample },
    Inapplicable { reason: String },
    Skipped { reason: String },
}

impl ClaimVerdict {
    pub fn refuted(counterexample: Counterexample) -> ClaimVerdict {
        ClaimVerdict::Refuted { counterexample }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ClaimVerdict::Confirmed { .. } => "Confirmed",
            ClaimVerdict::Refuted { .. } => "Refuted",
            ClaimVerdict::Inapplicable { .. } => "Inapplicable",
            ClaimVerdict::Skipped { .. } => "Skipped",
        }
    }

    fn detail(&self) -> String {
        match self {
            ClaimVerdict::Confirmed { detail } => detail.clone(),
            ClaimVerdict::Refuted { counterexample: c } => {
                let m = c.matrix.as_deref().unwrap_or("-");
                format!("{m} [{}] {}", fact_name(&c.fact), c.note)
            }
            ClaimVerdict::Inapplicable { reason } | ClaimVerdict::Skipped { reason } => reason.clone(),
        }
    }
}

fn fact_name(f: &Fact) -> String {
    serde_json::to_string(f).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimStatus {
    pub claim_id: String,
    pub scope: String,
    pub verdict: ClaimVerdict,
    pub statement: String,
}

impl ClaimStatus {
    pub fn new(id: &str, scope: String, verdict: ClaimVerdict) -> ClaimStatus {
        ClaimStatus {
            claim_id: id.to_string(),
            scope,
            verdict,
            statement: statement(id).to_string(),
        }
    }
}

pub const CLAIM_IDS: [&str; 17] = [
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "C13", "C14",
    "C15", "C16", "C17",
];

/// What each claim asserts, in the harness's notation.
pub fn statement(id: &str) -> &'static str {
    match id {
        "C1" => "G = H Q~ U",
        "C2" => "H Q~ cap U = { [[1, 2b/a], [0, 1]] : a != 0, a^2 - m b^2 = 1 }",
        "C3" => "H cap Q~, U cap H and U cap Q~ lie in {+-Id}",
        "C4" => "H cap Q~ U = { h in H : a != 0 }",
        "C5" => "H U cap Q~ = { q in Q~ : q11 != 0 }",
        "C6" => "H inside Q~ U iff -m is not a square",
        "C7" => "Q~ inside H U iff m is not a square",
        "C8" => "m not a square implies G = H U",
        "C9" => "for tau_1, G = H U union H omega U",
        "C10" => "H Q~ = Q~ H",
        "C11" => "G = U H Q~ = Q~ U H, and all six factor orders give G",
        "C12" => "Q = Q~",
        "C13" => "Q~ (and Q) consist of semisimple elements iff m is not a square",
        "C14" => "for m not a square, Q~ is the disjoint union of H-orbits of tau-split tori",
        "C15" => "characteristic 2, tau0: G = H Q~ union H omega Q~",
        "C16" => "|H Q~ cap U| = |H| - |{ b : -m b^2 = 1 }|",
        "C17" => "characteristic 2, infinite field, tau_m: G = H Q~ U",
        _ => "",
    }
}

/// One field and involution to run claims against.
#[derive(Clone, Debug)]
pub struct Scope {
    pub inv: Involution,
}

impl Scope {
    /// `tau0` over finite fields of characteristic 2, `tau_m` otherwise.
    pub fn new(field: &Field, m: Option<&Elem>) -> Result<Scope> {
        let inv = if field.characteristic() == 2 && field.is_finite() {
            make_tau0(field)?
        } else {
            let m = match m {
                Some(m) => m.clone(),
                None => field.one(),
            };
            make_involution(field, &m)?
        };
        Ok(Scope { inv })
    }

    pub fn label(&self) -> String {
        format!("{}, {}", self.inv.field(), inv_spec(&self.inv))
    }
}

/// `q in {3, 5, 7, 9, 11, 13}` with `m = 1` and `m = N_p`, then `F2`, `F4`.
pub fn default_sweep() -> Result<Vec<Scope>> {
    let mut out = Vec::new();
    for q in [3u64, 5, 7, 9, 11, 13] {
        let f = Field::finite(q)?;
        out.push(Scope::new(&f, Some(&f.one()))?);
        out.push(Scope::new(&f, f.least_non_square().as_ref())?);
    }
    for q in [2u64, 4] {
        out.push(Scope::new(&Field::finite(q)?, None)?);
    }
    Ok(out)
}

/// Run the selected claims (all when `filter` is `None`) on each scope.
/// Results are ordered by scope, then claim number.
pub fn run_claims(scopes: &[Scope], filter: Option<&[String]>) -> Vec<ClaimStatus> {
    let ids: Vec<&str> = CLAIM_IDS
        .iter()
        .copied()
        .filter(|id| filter.is_none_or(|f| f.iter().any(|x| x.eq_ignore_ascii_case(id))))
        .collect();
    scopes
        .par_iter()
        .flat_map_iter(|s| run_scope(s, &ids))
        .collect()
}

fn run_scope(scope: &Scope, ids: &[&str]) -> Vec<ClaimStatus> {
    let inv = &scope.inv;
    let f = inv.field();
    let universe = if f.is_finite() { Some(Universe::new(inv)) } else { None };
    ids.iter()
        .map(|id| {
            let verdict = match &universe {
                Some(Ok(u)) => finite_claim(id, u),
                Some(Err(e)) => Err(e.clone()),
                None => infinite_claim(id, inv),
            };
            let verdict = verdict.unwrap_or_else(|e| match e {
                Error::TooLarge(_) | Error::BudgetExhausted(_) => ClaimVerdict::Skipped { reason: e.to_string() },
                e => ClaimVerdict::Skipped { reason: format!("{}: {e}", e.name()) },
            });
            ClaimStatus::new(id, scope.label(), verdict)
        })
        .collect()
}

fn confirmed(detail: impl Into<String>) -> Result<ClaimVerdict> {
    Ok(ClaimVerdict::Confirmed { detail: detail.into() })
}

fn inapplicable(reason: impl Into<String>) -> Result<ClaimVerdict> {
    Ok(ClaimVerdict::Inapplicable { reason: reason.into() })
}

fn refuted(u: &Universe, g: &Mat2, fact: Fact, note: &str) -> Result<ClaimVerdict> {
    Ok(ClaimVerdict::refuted(Counterexample::new(&u.inv, g, fact, note)))
}

fn finite_claim(id: &str, u: &Universe) -> Result<ClaimVerdict> {
    let char2 = u.field().characteristic() == 2;
    if char2 && id != "C15" {
        return inapplicable("tau_m is replaced by tau0 over finite fields of characteristic 2");
    }
    if !char2 && id == "C15" {
        return inapplicable("characteristic 2 only");
    }
    let m = u.m();
    let m_square = match m {
        Some(m) => m.is_square()?,
        None => false,
    };
    match id {
        "C1" => claim_c1(u),
        "C2" | "C4" | "C5" => claim_intersection(id, u),
        "C3" => claim_c3(u),
        "C6" => {
            let minus_m = -(m.unwrap());
            claim_iff(u, "H", &u.h, ProductSet::QtU, !minus_m.is_square()?)
        }
        "C7" => claim_iff(u, "Q~", &u.qt, ProductSet::HU, !m_square),
        "C8" => {
            if m_square {
                return inapplicable("m is a square");
            }
            claim_equals_g(u, ProductSet::HU, vec![&u.h, &u.u], "|H||U|")
        }
        "C9" => {
            if !m_square {
                return inapplicable("stated for tau_1 (m a square)");
            }
            let w = vec![Mat2::identity(u.field()), Mat2::omega(u.field())];
            claim_equals_g_with(u, ProductSet::HWU, u.product_set(&[&u.h, &w, &u.u]), 2 * u.h.len() * u.u.len(), "2|H||U|")
        }
        "C10" => {
            let hq = u.product_set(&[&u.h, &u.qt]);
            let qh = u.product_set(&[&u.qt, &u.h]);
            if let Some(x) = hq.iter().filter(|x| !qh.contains(*x)).min_by_key(|x| key(x)) {
                return refuted(u, x, Fact::NotInProduct { set: ProductSet::QtH }, "in H Q~");
            }
            if let Some(x) = qh.iter().filter(|x| !hq.contains(*x)).min_by_key(|x| key(x)) {
                return refuted(u, x, Fact::NotInProduct { set: ProductSet::HQt }, "in Q~ H");
            }
            confirmed(format!("|H Q~| = |Q~ H| = {}", hq.len()))
        }
        "C11" => claim_c11(u),
        "C12" => Ok(q_equals_qtilde(&u.inv).verdict),
        "C13" => claim_c13(u, m_square),
        "C14" => {
            if m_square {
                return inapplicable("m is a square");
            }
            claim_c14(u)
        }
        "C15" => claim_c15(u),
        "C16" => claim_c16(u),
        "C17" => inapplicable("infinite fields of characteristic 2 only"),
        _ => Err(Error::BadParameter(format!("unknown claim {id}"))),
    }
}

/// Sort key for finite-field matrices.
fn key(g: &Mat2) -> [u64; 4] {
    let e = g.entries();
    [0, 1, 2, 3].map(|i| e[i].index().unwrap_or(0))
}

fn claim_c1(u: &Universe) -> Result<ClaimVerdict> {
    let failures: Vec<&Mat2> = u
        .g
        .par_iter()
        .filter(|g| decompose_hqu(g, &u.inv).is_err())
        .collect();
    if let Some(g) = failures.first() {
        return refuted(u, g, Fact::Undecomposable { order: FactorOrder::HQU }, "decompose_hqu failed");
    }
    let prod = u.product_set(&[&u.h, &u.qt, &u.u]);
    if let Some(g) = first_missing(&u.g, &prod) {
        return refuted(u, g, Fact::NotInProduct { set: ProductSet::HQtU }, "missing from H Q~ U");
    }
    confirmed(format!("all {} elements decompose; |H Q~ U| = |G|", u.g.len()))
}

/// Brute-force intersection and the closed form, as sets.
fn intersection_sets(set: Intersection, u: &Universe) -> Result<(Vec<Mat2>, Vec<Mat2>)> {
    let f = u.field();
    Ok(match set {
        Intersection::HQtCapU => {
            let brute = u.u.iter().filter(|x| u.contains(ProductSet::HQt, x).unwrap()).cloned().collect();
            let mut formula: Vec<Mat2> = Vec::new();
            for (a, b) in u.h_params() {
                if a.is_zero() {
                    continue;
                }
                let x = Mat2::unipotent(&(&f.int(2) * &b).div(&a)?);
                if !formula.contains(&x) {
                    formula.push(x);
                }
            }
            (brute, formula)
        }
        Intersection::HCapQtU => {
            let brute = u.h.iter().filter(|x| u.contains(ProductSet::QtU, x).unwrap()).cloned().collect();
            let formula = u.h.iter().filter(|h| !h.e11().is_zero()).cloned().collect();
            (brute, formula)
        }
        Intersection::HUCapQt => {
            let brute = u.qt.iter().filter(|x| u.contains(ProductSet::HU, x).unwrap()).cloned().collect();
            let formula = u.qt.iter().filter(|q| !q.e11().is_zero()).cloned().collect();
            (brute, formula)
        }
        Intersection::HCapQt => {
            (u.h.iter().filter(|x| u.inv.in_extended_symmetric(x)).cloned().collect(), pm_id(f))
        }
        Intersection::UCapH => (u.u.iter().filter(|x| u.inv.in_fixed_group(x)).cloned().collect(), pm_id(f)),
        Intersection::UCapQt => {
            (u.u.iter().filter(|x| u.inv.in_extended_symmetric(x)).cloned().collect(), pm_id(f))
        }
    })
}

fn pm_id(f: &Field) -> Vec<Mat2> {
    let id = Mat2::identity(f);
    vec![id.neg(), id]
}

fn claim_intersection(id: &str, u: &Universe) -> Result<ClaimVerdict> {
    let set = match id {
        "C2" => Intersection::HQtCapU,
        "C4" => Intersection::HCapQtU,
        _ => Intersection::HUCapQt,
    };
    let (brute, formula) = intersection_sets(set, u)?;
    let f = u.field();
    let two = f.int(2);
    let preferred = two.inv().ok().map(|h| Mat2::diag(&two, &h));
    let mut outside: Vec<&Mat2> = formula.iter().filter(|x| !brute.contains(x)).collect();
    // diag(2, 1/2) is the natural witness when it applies
    outside.sort_by_key(|x| Some(*x) != preferred.as_ref());
    if let Some(x) = outside.first() {
        return refuted(u, x, Fact::FormulaOnly { set }, "in the closed form, not in the intersection");
    }
    if let Some(x) = brute.iter().find(|x| !formula.contains(x)) {
        return refuted(u, x, Fact::SetOnly { set }, "in the intersection, not in the closed form");
    }
    confirmed(format!("{} elements, brute force = closed form", brute.len()))
}

fn claim_c3(u: &Universe) -> Result<ClaimVerdict> {
    let mut sizes = Vec::new();
    for set in [Intersection::HCapQt, Intersection::UCapH, Intersection::UCapQt] {
        let (brute, center) = intersection_sets(set, u)?;
        if let Some(x) = brute.iter().find(|x| !center.contains(x)) {
            return refuted(u, x, Fact::SetOnly { set }, "not +-Id");
        }
        sizes.push(format!("|{set:?}| = {}", brute.len()));
    }
    confirmed(sizes.join(", "))
}

/// `subset <= superset` iff `expected`.
fn claim_iff(u: &Universe, name: &str, subset: &[Mat2], superset: ProductSet, expected: bool) -> Result<ClaimVerdict> {
    let outside = subset.iter().find(|x| !u.contains(superset, x).unwrap());
    let holds = outside.is_none();
    if holds == expected {
        return confirmed(format!("containment {} and the square condition agree", if holds { "holds" } else { "fails" }));
    }
    let fact = Fact::Containment { subset: name.to_string(), superset, holds };
    match outside {
        Some(x) => refuted(u, x, fact, &format!("{name} not inside {superset:?}")),
        None => Ok(ClaimVerdict::refuted(Counterexample::without_matrix(
            &u.inv,
            fact,
            &format!("{name} inside {superset:?} although the condition fails"),
        ))),
    }
}

fn claim_equals_g(u: &Universe, set: ProductSet, parts: Vec<&Vec<Mat2>>, bound: &str) -> Result<ClaimVerdict> {
    let slices: Vec<&[Mat2]> = parts.iter().map(|p| p.as_slice()).collect();
    let n: usize = parts.iter().map(|p| p.len()).product();
    claim_equals_g_with(u, set, u.product_set(&slices), n, bound)
}

fn claim_equals_g_with(u: &Universe, set: ProductSet, prod: HashSet<Mat2>, n: usize, bound: &str) -> Result<ClaimVerdict> {
    match first_missing(&u.g, &prod) {
        Some(g) => refuted(
            u,
            g,
            Fact::NotInProduct { set },
            &format!("{bound} = {n}, |{set:?}| = {} < |G| = {}", prod.len(), u.g.len()),
        ),
        None => confirmed(format!("|{set:?}| = |G| = {}", u.g.len())),
    }
}

fn claim_c11(u: &Universe) -> Result<ClaimVerdict> {
    for order in FactorOrder::SIX {
        let bad = u.g.par_iter().find_first(|g| decompose_reordered(g, &u.inv, order).is_err());
        if let Some(g) = bad {
            return refuted(u, g, Fact::Undecomposable { order }, "decompose_reordered failed");
        }
    }
    confirmed(format!("all {} elements decompose in all six orders", u.g.len()))
}

fn claim_c13(u: &Universe, m_square: bool) -> Result<ClaimVerdict> {
    let nss = u.qt.iter().find(|q| !is_semisimple(q).unwrap());
    if !m_square {
        return match nss {
            Some(q) => refuted(u, q, Fact::NotSemisimple, "m is not a square"),
            None => confirmed(format!("all {} elements of Q~ are semisimple", u.qt.len())),
        };
    }
    if nss.is_none() {
        return Ok(ClaimVerdict::refuted(Counterexample::without_matrix(&u.inv, Fact::AllSemisimple, "m is a square")));
    }
    let image = u.symmetric_image()?;
    let f = u.field();
    for x in f.elements()? {
        if (&x + &f.one()).is_zero() {
            continue;
        }
        let q = construct_nonsemisimple_in_q(&u.inv, &x)?;
        if is_semisimple(&q)? || !image.contains(&q) {
            return refuted(u, &q, Fact::NotSemisimple, "construction left Q or became semisimple");
        }
    }
    let count = u.qt.iter().filter(|q| !is_semisimple(q).unwrap()).count();
    confirmed(format!("{count} non-semisimple elements of Q~; every constructed one lies in Q"))
}

/// Orbits of `H` on the tori `C(q)`, `q` non-central in `Q~`.
pub fn torus_orbits(u: &Universe) -> Result<Vec<TorusOrbit>> {
    let mut tori: BTreeMap<Vec<[u64; 4]>, Vec<Mat2>> = BTreeMap::new();
    let mut covered: HashSet<Mat2> = HashSet::new();
    for q in &u.qt {
        if q.is_scalar() || covered.contains(q) {
            continue;
        }
        let torus: Vec<Mat2> = u.g.iter().filter(|a| a.mul(q) == q.mul(a)).cloned().collect();
        covered.extend(torus.iter().cloned());
        let mut k: Vec<[u64; 4]> = torus.iter().map(key).collect();
        k.sort();
        tori.insert(k, torus);
    }
    let mut classes: BTreeMap<Vec<[u64; 4]>, Vec<Mat2>> = BTreeMap::new();
    for torus in tori.values() {
        let mut best: Option<Vec<[u64; 4]>> = None;
        for (h, hi) in u.h.iter().zip(&u.h_inv) {
            let mut k: Vec<[u64; 4]> = torus.iter().map(|a| key(&h.mul(a).mul(hi))).collect();
            k.sort();
            if best.as_ref().is_none_or(|b| k < *b) {
                best = Some(k);
            }
        }
        classes.entry(best.unwrap()).or_insert_with(|| torus.clone());
    }
    let mut out = Vec::new();
    for torus in classes.values() {
        let orbit: HashSet<Mat2> = u
            .h
            .iter()
            .zip(&u.h_inv)
            .flat_map(|(h, hi)| torus.iter().map(move |a| h.mul(a).mul(hi)))
            .collect();
        let rep = torus.iter().filter(|a| !a.is_scalar()).min_by_key(|a| key(a)).unwrap().clone();
        out.push(TorusOrbit { representative: rep, torus_size: torus.len(), orbit: orbit.into_iter().collect() });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TorusOrbit {
    pub representative: Mat2,
    pub torus_size: usize,
    pub orbit: Vec<Mat2>,
}

fn claim_c14(u: &Universe) -> Result<ClaimVerdict> {
    let orbits = torus_orbits(u)?;
    let qt: HashSet<&Mat2> = u.qt.iter().collect();
    let mut seen: HashSet<Mat2> = HashSet::new();
    for o in &orbits {
        for x in &o.orbit {
            if !qt.contains(x) {
                return refuted(u, x, Fact::SetOnly { set: Intersection::HCapQt }, "orbit element outside Q~");
            }
            if !x.is_scalar() && !seen.insert(x.clone()) {
                return refuted(u, x, Fact::CountMismatch { name: "orbit overlap".into(), stated: 1, computed: 2 }, "two orbits meet off the center");
            }
        }
    }
    if let Some(q) = u.qt.iter().find(|q| !q.is_scalar() && !seen.contains(*q)) {
        return refuted(u, q, Fact::CountMismatch { name: "orbit cover".into(), stated: 1, computed: 0 }, "not covered");
    }
    let sizes: Vec<String> = orbits.iter().map(|o| o.orbit.len().to_string()).collect();
    confirmed(format!("{} orbits of sizes [{}] partition Q~ off {{+-Id}}", orbits.len(), sizes.join(", ")))
}

fn claim_c15(u: &Universe) -> Result<ClaimVerdict> {
    for g in &u.g {
        if decompose_char2_finite(g, &u.inv).is_err() {
            return refuted(u, g, Fact::Undecomposable { order: FactorOrder::HWQ }, "decompose_char2_finite failed");
        }
    }
    let w = vec![Mat2::identity(u.field()), Mat2::from_ints(u.field(), [[0, 1], [1, 0]])];
    let prod = u.product_set(&[&u.h, &w, &u.qt]);
    if let Some(g) = first_missing(&u.g, &prod) {
        return refuted(u, g, Fact::NotInProduct { set: ProductSet::HWQt }, "missing from H W Q~");
    }
    confirmed(format!("all {} elements factor as h w q", u.g.len()))
}

/// `(stated count, parameter pairs, distinct matrices)` for `H Q~ cap U`.
pub fn c16_counts(u: &Universe) -> Result<(usize, usize, usize)> {
    let m = u.m().ok_or(Error::KindMismatch)?;
    let bs = u.field().elements()?.into_iter().filter(|b| !b.is_zero() && (-(m * &b.square())).is_one()).count();
    let stated = u.h.len() - bs;
    let pairs = u.h_params().iter().filter(|(a, _)| !a.is_zero()).count();
    let (brute, _) = intersection_sets(Intersection::HQtCapU, u)?;
    Ok((stated, pairs, brute.len()))
}

fn claim_c16(u: &Universe) -> Result<ClaimVerdict> {
    let (stated, pairs, distinct) = c16_counts(u)?;
    if stated != pairs {
        return Ok(ClaimVerdict::refuted(Counterexample::without_matrix(
            &u.inv,
            Fact::CountMismatch { name: "parameter pairs".into(), stated, computed: pairs },
            &format!("distinct matrices: {distinct}"),
        )));
    }
    confirmed(format!("stated {stated} = parameter pairs {pairs}; distinct matrices {distinct}"))
}

const SAMPLE_BUDGET: usize = 200;

fn infinite_claim(id: &str, inv: &Involution) -> Result<ClaimVerdict> {
    let f = inv.field();
    let m = inv.m_or_err()?;
    if f.characteristic() == 2 {
        return if id == "C17" { claim_c17(inv) } else { inapplicable("only C17 runs over infinite fields of characteristic 2") };
    }
    let samples = || random_sl2(f, SAMPLE_BUDGET, 0xC1A1);
    match id {
        "C1" => {
            for g in samples()? {
                decompose_hqu(&g, inv)?;
            }
            confirmed(format!("sampled: {SAMPLE_BUDGET} random elements decompose"))
        }
        "C11" => {
            for g in samples()?.iter().take(40) {
                for order in FactorOrder::SIX {
                    decompose_reordered(g, inv, order)?;
                }
            }
            confirmed("sampled: 40 random elements decompose in all six orders")
        }
        "C12" => Ok(q_equals_qtilde(inv).verdict),
        "C13" => {
            if m.is_square()? {
                let q = construct_nonsemisimple_in_q(inv, &f.zero())?;
                let w = witness_in_q(&q, inv, None)?;
                if is_semisimple(&q)? || !w.verdict.is_yes() {
                    return Ok(ClaimVerdict::refuted(Counterexample::new(inv, &q, Fact::NotSemisimple, "construction failed")));
                }
                return confirmed(format!("{} is a non-semisimple element of Q", mat_spec(&q)));
            }
            for q in random_qtilde(inv, SAMPLE_BUDGET, 0xC13)? {
                if !is_semisimple(&q)? {
                    return Ok(ClaimVerdict::refuted(Counterexample::new(inv, &q, Fact::NotSemisimple, "m is not a square")));
                }
            }
            confirmed(format!("sampled: {SAMPLE_BUDGET} elements of Q~ are semisimple"))
        }
        "C15" | "C17" => inapplicable("characteristic 2 only"),
        _ => Ok(ClaimVerdict::Skipped { reason: "needs exhaustive ground truth over a finite field".into() }),
    }
}

fn claim_c17(inv: &Involution) -> Result<ClaimVerdict> {
    let f = inv.field();
    let m = inv.m_or_err()?;
    if !m.is_square()? {
        let g = Mat2::from_ints(f, [[0, 1], [1, 0]]);
        if let MembershipVerdict::Undecided(_) = decompose_char2_infinite(&g, inv)? {
            if char2_outside(&g, m)? {
                return Ok(ClaimVerdict::refuted(Counterexample::new(
                    inv,
                    &g,
                    Fact::OutsideHQtUChar2,
                    "m is not a square, so H = {Id}; g u has e11 = 0 and e21 != m e12 for every u",
                )));
            }
        }
    }
    let mut undecided = 0;
    for g in random_sl2(f, SAMPLE_BUDGET, 0xC17)? {
        if !decompose_char2_infinite(&g, inv)?.is_yes() {
            undecided += 1;
        }
    }
    if undecided > 0 {
        return Ok(ClaimVerdict::Skipped { reason: format!("{undecided} of {SAMPLE_BUDGET} samples undecided") });
    }
    confirmed(format!("sampled: {SAMPLE_BUDGET} random elements decompose"))
}

/// For `H = {Id}`: `g u = [[x, x u + y], [z, z u + w]]` has the `Q~`
/// pattern `e21 = m e12` for some `u` unless `x = 0` and `z != m y`.
fn char2_outside(g: &Mat2, m: &Elem) -> Result<bool> {
    let [x, y, z, _] = g.entries();
    Ok(!m.is_square()? && x.is_zero() && *z != m * y)
}

/// Re-check a counterexample from its serialized form alone.
pub fn replay(cx: &Counterexample) -> Result<bool> {
    let field = parse_field(&cx.field)?;
    let inv = parse_involution(&field, &cx.involution)?;
    let g = cx.matrix.as_deref().map(|t| parse_mat(&field, t)).transpose()?;
    let need = || g.clone().ok_or_else(|| Error::Parse("counterexample has no matrix".into()));
    if !field.is_finite() {
        return match &cx.fact {
            Fact::NotInSymmetricSpace => {
                let q = need()?;
                Ok(inv.in_extended_symmetric(&q) && witness_in_q(&q, &inv, None)?.verdict.is_no())
            }
            Fact::OutsideHQtUChar2 => char2_outside(&need()?, inv.m_or_err()?),
            Fact::NotSemisimple => {
                let q = need()?;
                Ok(inv.in_extended_symmetric(&q) && !is_semisimple(&q)?)
            }
            _ => Err(Error::Unsupported("replay of this fact over an infinite field".into())),
        };
    }
    let u = Universe::new(&inv)?;
    match &cx.fact {
        Fact::NotInSymmetricSpace => {
            let q = need()?;
            Ok(inv.in_extended_symmetric(&q) && !u.contains(ProductSet::Q, &q)?)
        }
        Fact::NotInProduct { set } => Ok(!u.contains(*set, &need()?)?),
        Fact::FormulaOnly { set } | Fact::SetOnly { set } => {
            let x = need()?;
            let (brute, formula) = intersection_sets(*set, &u)?;
            let formula_only = matches!(cx.fact, Fact::FormulaOnly { .. });
            Ok(formula.contains(&x) != brute.contains(&x) && brute.contains(&x) != formula_only)
        }
        Fact::NotSemisimple => {
            let q = need()?;
            Ok(inv.in_extended_symmetric(&q) && !is_semisimple(&q)?)
        }
        Fact::AllSemisimple => Ok(u.qt.iter().all(|q| is_semisimple(q).unwrap()) && inv.m_is_square()?),
        Fact::Containment { subset, superset, holds } => {
            let members = if subset == "H" { &u.h } else { &u.qt };
            let actual = members.iter().all(|x| u.contains(*superset, x).unwrap());
            Ok(actual == *holds)
        }
        Fact::CountMismatch { stated, computed, name } if name == "parameter pairs" => {
            let (s, p, _) = c16_counts(&u)?;
            Ok(s == *stated && p == *computed && s != p)
        }
        Fact::CountMismatch { .. } => Ok(claim_c14(&u)?.label() == "Refuted"),
        Fact::Undecomposable { order } => {
            let g = need()?;
            Ok(match order {
                FactorOrder::HWQ => decompose_char2_finite(&g, &inv).is_err(),
                o => decompose_reordered(&g, &inv, *o).is_err(),
            })
        }
        Fact::OutsideHQtUChar2 => Ok(!u.contains(ProductSet::HQtU, &need()?)?),
    }
}

// ---- census report ----

#[derive(Clone, Debug, Serialize)]
pub struct OrbitEntry {
    pub representative: String,
    pub torus_size: usize,
    pub orbit_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupCensus {
    pub field: String,
    pub m: String,
    pub sizes: BTreeMap<String, usize>,
    pub intersection_sizes: BTreeMap<String, usize>,
    pub orbit_partition: Vec<OrbitEntry>,
}

pub fn census_report(inv: &Involution) -> Result<GroupCensus> {
    let u = Universe::new(inv)?;
    let f = u.field();
    let image = u.symmetric_image()?;
    let b = u.g.iter().filter(|g| g.e21().is_zero()).count();
    let mut sizes = BTreeMap::new();
    for (k, v) in [
        ("B", b),
        ("G", u.g.len()),
        ("H", u.h.len()),
        ("Q", image.len()),
        ("Q~", u.qt.len()),
        ("T", u.t.len()),
        ("U", u.u.len()),
    ] {
        sizes.insert(k.to_string(), v);
    }
    let mut inter = BTreeMap::new();
    let mut orbits = Vec::new();
    if let Some(m) = u.m() {
        let (stated, pairs, distinct) = c16_counts(&u)?;
        inter.insert("HQ~ cap U: distinct".to_string(), distinct);
        inter.insert("HQ~ cap U: parameter pairs".to_string(), pairs);
        inter.insert("HQ~ cap U: stated".to_string(), stated);
        for (name, set) in [("H cap Q~U", Intersection::HCapQtU), ("HU cap Q~", Intersection::HUCapQt)] {
            let (brute, formula) = intersection_sets(set, &u)?;
            inter.insert(format!("{name}: distinct"), brute.len());
            inter.insert(format!("{name}: closed form"), formula.len());
        }
        if !m.is_square()? {
            for o in torus_orbits(&u)? {
                orbits.push(OrbitEntry {
                    representative: o.representative.to_string(),
                    torus_size: o.torus_size,
                    orbit_size: o.orbit.len(),
                });
            }
        }
    }
    Ok(GroupCensus {
        field: f.to_string(),
        m: inv_spec(inv),
        sizes,
        intersection_sizes: inter,
        orbit_partition: orbits,
    })
}

/// Deterministic report: one machine-readable line per claim, then a table.
pub fn format_claims(statuses: &[ClaimStatus]) -> String {
    let mut out = String::from("# claims\n");
    for s in statuses {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", s.claim_id, s.scope, s.verdict.label(), s.verdict.detail());
    }
    out.push_str("\n# summary\n");
    let mut table: BTreeMap<(usize, &str), BTreeMap<&str, usize>> = BTreeMap::new();
    for s in statuses {
        let n: usize = s.claim_id[1..].parse().unwrap_or(0);
        *table.entry((n, s.claim_id.as_str())).or_default().entry(s.verdict.label()).or_default() += 1;
    }
    let _ = writeln!(out, "{:<5} {:>9} {:>7} {:>12} {:>7}  statement", "claim", "Confirmed", "Refuted", "Inapplicable", "Skipped");
    for ((_, id), counts) in &table {
        let c = |k: &str| counts.get(k).copied().unwrap_or(0);
        let _ = writeln!(
            out,
            "{:<5} {:>9} {:>7} {:>12} {:>7}  {}",
            id,
            c("Confirmed"),
            c("Refuted"),
            c("Inapplicable"),
            c("Skipped"),
            statement(id)
        );
    }
    out
}

pub fn format_census(c: &GroupCensus) -> String {
    let mut out = format!("# census {}, {}\n", c.field, c.m);
    for (k, v) in &c.sizes {
        let _ = writeln!(out, "|{k}| = {v}");
    }
    for (k, v) in &c.intersection_sizes {
        let _ = writeln!(out, "|{k}| = {v}");
    }
    for o in &c.orbit_partition {
        let _ = writeln!(out, "orbit {}: torus {}, orbit {}", o.representative, o.torus_size, o.orbit_size);
    }
    out
}
