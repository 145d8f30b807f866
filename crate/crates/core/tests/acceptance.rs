//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines always print; exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl2_decomp::census::{
    default_sweep, replay, run_claims, sl2_elements, torus_orbits, ClaimStatus, ClaimVerdict, Scope,
    Universe,
};
use sl2_decomp::decomp::{decompose_char2_finite, decompose_hqu, requires_unipotent};
use sl2_decomp::error::Result;
use sl2_decomp::fields::{
    hilbert_symbol, is_isotropic_ternary, relevant_places, Elem, Field, Place, SquareClassReps,
};
use sl2_decomp::involution::{make_involution, make_tau0, Involution};
use sl2_decomp::mat2::{is_semisimple, Mat2};
use sl2_decomp::symspace::{construct_nonsemisimple_in_q, is_witness, random_qtilde, witness_in_q};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok: true, detail: detail.into() })
}

fn fail(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok: false, detail: detail.into() })
}

fn tau(f: &Field, m: &Elem) -> Involution {
    make_involution(f, m).unwrap()
}

/// `1` and the least non-square.
fn both_classes(f: &Field) -> Vec<Elem> {
    let mut ms = vec![f.one()];
    ms.extend(f.least_non_square());
    ms
}

fn product(a: &[Mat2], b: &[Mat2]) -> HashSet<Mat2> {
    a.iter().flat_map(|x| b.iter().map(move |y| x.mul(y))).collect()
}

fn height(g: &Mat2) -> u64 {
    g.entries()
        .iter()
        .map(|e| {
            let r = e.as_rational().unwrap();
            let n: u64 = r.numer().magnitude().try_into().unwrap_or(u64::MAX);
            let d: u64 = r.denom().magnitude().try_into().unwrap_or(u64::MAX);
            n.max(d)
        })
        .max()
        .unwrap()
}

// 1
fn main_decomposition() -> Result<Outcome> {
    let mut checked = 0;
    for q in [3u64, 5, 7, 9, 11] {
        let f = Field::finite(q)?;
        let g = sl2_elements(&f)?;
        for m in both_classes(&f) {
            let inv = tau(&f, &m);
            for x in &g {
                let r = decompose_hqu(x, &inv)?;
                r.validate(x, &inv)?;
                if r.h.mul(&r.q).mul(&r.u) != *x {
                    return fail(format!("{x} over F{q}, {inv}: product differs"));
                }
                checked += 1;
            }
            let h: Vec<Mat2> = g.iter().filter(|x| inv.in_fixed_group(x)).cloned().collect();
            let qt: Vec<Mat2> = g.iter().filter(|x| inv.in_extended_symmetric(x)).cloned().collect();
            let u: Vec<Mat2> = g.iter().filter(|x| x.e21().is_zero() && x.e11().is_one() && x.e22().is_one()).cloned().collect();
            let hq: Vec<Mat2> = product(&h, &qt).into_iter().collect();
            let hqu = product(&hq, &u);
            if hqu.len() != g.len() {
                return fail(format!("|H Q~ U| = {} but |G| = {} over F{q}, {inv}", hqu.len(), g.len()));
            }
        }
    }
    pass(format!("{checked} elements validated; H Q~ U = G on all 10 scopes"))
}

// 2
fn rational_round_trip() -> Result<Outcome> {
    let q = Field::rationals();
    let mut n = 0;
    let mut max_height = 0;
    for (i, m) in [1, -1, 2, -2, 3].into_iter().enumerate() {
        let inv = tau(&q, &q.int(m));
        for g in sl2_decomp::census::random_sl2(&q, 500, 1000 + i as u64)? {
            let hgt = height(&g);
            max_height = max_height.max(hgt);
            if hgt > 1_000_000 {
                return fail(format!("generator produced height {hgt}"));
            }
            let r = decompose_hqu(&g, &inv)?;
            r.validate(&g, &inv)?;
            if r.product() != g {
                return fail(format!("{g}, tau({m}): reconstruction differs"));
            }
            n += 1;
        }
    }
    pass(format!("{n} matrices (500 per m), max entry height {max_height}, exact"))
}

// 3
fn padic_round_trip() -> Result<Outcome> {
    let mut worst = i64::MAX;
    let mut n = 0;
    for p in [3u64, 5, 7] {
        let f = Field::padic(p, 20)?;
        let reps = match f.square_class_reps() {
            SquareClassReps::Finite(r) => r,
            SquareClassReps::Unbounded => unreachable!(),
        };
        for (i, g) in sl2_decomp::census::random_sl2(&f, 200, 3000 + p)?.into_iter().enumerate() {
            let inv = tau(&f, &reps[i % reps.len()].rep);
            let r = decompose_hqu(&g, &inv)?;
            r.validate(&g, &inv)?;
            let digits = r.product().agreement_digits(&g).unwrap_or(20);
            worst = worst.min(digits);
            n += 1;
        }
    }
    if worst < 12 {
        return fail(format!("only {worst} digits survive"));
    }
    pass(format!("{n} matrices over Q3, Q5, Q7 at N = 20, all square classes of m; at least {worst} digits agree"))
}

// 4
fn sqrt5_example() -> Result<Outcome> {
    let q = Field::rationals();
    let k = Field::quad_ext(&q, &q.int(5))?;
    let c = &k.generator()? - &k.int(3);
    let g = Mat2::new(k.one(), k.int(2).div(&c)?, c.div(&k.int(2))?, k.int(2))?;
    let inv = tau(&k, &k.one());
    let v = requires_unipotent(&g, &inv)?;
    let r = decompose_hqu(&g, &inv)?;
    r.validate(&g, &inv)?;
    if !v.is_no() {
        return fail(format!("expected No, got {}", v.label()));
    }
    pass(format!("g not in H Q~ ({}); g = h q u with u = {}", v.label(), r.u))
}

fn statuses_for(claims: &[&str]) -> Vec<ClaimStatus> {
    let filter: Vec<String> = claims.iter().map(|c| c.to_string()).collect();
    run_claims(&default_sweep().unwrap(), Some(&filter))
}

fn odd_scope(s: &ClaimStatus) -> bool {
    !s.scope.contains("tau0")
}

// 5
fn q_equals_qtilde() -> Result<Outcome> {
    let st = statuses_for(&["C12"]);
    let odd: Vec<&ClaimStatus> = st.iter().filter(|s| odd_scope(s)).collect();
    if let Some(s) = odd.iter().find(|s| s.verdict.label() != "Confirmed") {
        return fail(format!("C12 on {}: {}", s.scope, s.verdict.label()));
    }
    let mut checked = 0;
    for f in [Field::rationals(), Field::padic(3, 20)?, Field::padic(5, 20)?, Field::padic(7, 20)?] {
        let inv = tau(&f, &f.one());
        for q in random_qtilde(&inv, 200, 55)? {
            let r = witness_in_q(&q, &inv, None)?;
            match r.witness() {
                Some(g) if is_witness(g, &q, &inv)? => checked += 1,
                _ => return fail(format!("no verified witness for {q} over {f}")),
            }
        }
    }
    pass(format!(
        "C12 Confirmed on {} odd scopes (tau0 scopes are outside the statement); {checked} witnesses verified over Q, Q3, Q5, Q7",
        odd.len()
    ))
}

// 6
fn three_adic_diagonal() -> Result<Outcome> {
    let f = Field::padic(3, 20)?;
    let inv = tau(&f, &f.int(3));
    let q = Mat2::diag(&f.ratio(1, 3)?, &f.int(3));
    let r = witness_in_q(&q, &inv, None)?;
    let cert = r.certificate.clone().unwrap_or_default();
    let wanted = "6 is in the square class pN_p (rep -3)";
    if !r.verdict.is_no() || !cert.contains(wanted) {
        return fail(format!("{}: {cert}", r.verdict.label()));
    }
    pass(format!("No; certificate: {cert}"))
}

// 7
fn semisimplicity() -> Result<Outcome> {
    let st = statuses_for(&["C13"]);
    let odd: Vec<&ClaimStatus> = st.iter().filter(|s| odd_scope(s)).collect();
    if let Some(s) = odd.iter().find(|s| s.verdict.label() != "Confirmed") {
        return fail(format!("C13 on {}: {}", s.scope, s.verdict.label()));
    }
    let mut built = 0;
    let q = Field::rationals();
    let fields = [(q.clone(), vec![1, 4, 9, 25]), (Field::finite(7)?, vec![1, 2, 4]), (Field::padic(5, 20)?, vec![1, 4, 6])];
    for (f, ms) in fields {
        for m in ms {
            let inv = tau(&f, &f.int(m));
            for x in [0, 1, 2, 3, 5, 11] {
                let x = f.int(x);
                if (&x + &f.one()).is_zero() {
                    continue;
                }
                let g = construct_nonsemisimple_in_q(&inv, &x)?;
                if is_semisimple(&g)? || !witness_in_q(&g, &inv, None)?.verdict.is_yes() {
                    return fail(format!("construction {g} over {f}, {inv}"));
                }
                built += 1;
            }
        }
    }
    pass(format!("C13 Confirmed on {} odd scopes; {built} constructed elements non-semisimple and in Q", odd.len()))
}

fn rand_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-200..=200);
        if n != 0 {
            return BigRational::new(n.into(), rng.gen_range(1i64..=30).into());
        }
    }
}

// 8
fn hilbert() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let one = BigRational::from_integer(1.into());
    for _ in 0..1000 {
        let (a, b, c) = (rand_rational(&mut rng), rand_rational(&mut rng), rand_rational(&mut rng));
        let mut places: Vec<Place> = relevant_places(&a, &(&b * &c))?;
        places.extend([Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Prime(7)]);
        places.sort();
        places.dedup();
        for v in &places {
            let ab = hilbert_symbol(&a, &b, v)?;
            let checks = [
                hilbert_symbol(&a, &-&a, v)? == 1,
                hilbert_symbol(&a, &(&c * &c), v)? == 1,
                hilbert_symbol(&b, &a, v)? == ab,
                hilbert_symbol(&a, &(&b * &c), v)? == ab * hilbert_symbol(&a, &c, v)?,
                a == one || hilbert_symbol(&(&one - &a), &a, v)? == 1,
            ];
            if let Some(i) = checks.iter().position(|ok| !ok) {
                return fail(format!("property {i} fails for ({a}, {b}, {c}) at {v}"));
            }
        }
        let prod: i32 = relevant_places(&a, &b)?.iter().map(|v| hilbert_symbol(&a, &b, v).unwrap()).product();
        if prod != 1 {
            return fail(format!("product formula fails for ({a}, {b})"));
        }
    }
    let mut iso = 0;
    for _ in 0..100 {
        let pick = |rng: &mut ChaCha8Rng| loop {
            let x: i64 = rng.gen_range(-30..=30);
            if x != 0 {
                return x;
            }
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let brute = (-50i64..=50).any(|x| {
            (0i64..=50).any(|y| {
                let z2 = a * x * x + b * y * y;
                (x, y) != (0, 0) && z2 >= 0 && ((z2 as f64).sqrt().round() as i64).pow(2) == z2
            })
        });
        let claimed = is_isotropic_ternary(&BigRational::from_integer(a.into()), &BigRational::from_integer(b.into()))?;
        if brute != claimed {
            return fail(format!("{a}x^2 + {b}y^2 - z^2: search {brute}, Hasse {claimed}"));
        }
        iso += brute as usize;
    }
    pass(format!("1000 triples: (a,-a) = (a,c^2) = (1-a,a) = 1, symmetry, bimultiplicativity, product formula; isotropy agrees on 100 forms ({iso} isotropic)"))
}

/// Independent ground truth for the finite-field claims C2 to C9.
fn oracle(id: &str, inv: &Involution) -> Result<&'static str> {
    let f = inv.field();
    let m = inv.m().unwrap().clone();
    let g = sl2_elements(f)?;
    let in_h = |x: &Mat2| x.e11() == x.e22() && *x.e21() == &m * x.e12();
    let in_qt = |x: &Mat2| *x.e21() == -(&m * x.e12());
    let in_u = |x: &Mat2| x.e21().is_zero() && x.e11().is_one() && x.e22().is_one();
    let h: Vec<Mat2> = g.iter().filter(|x| in_h(x)).cloned().collect();
    let qt: Vec<Mat2> = g.iter().filter(|x| in_qt(x)).cloned().collect();
    let u: Vec<Mat2> = g.iter().filter(|x| in_u(x)).cloned().collect();
    let set = |v: Vec<Mat2>| -> HashSet<Mat2> { v.into_iter().collect() };
    let hq = product(&h, &qt);
    let qu = product(&qt, &u);
    let hu = product(&h, &u);
    let verdict = |b: bool| if b { "Confirmed" } else { "Refuted" };
    let m_sq = m.is_square()?;
    Ok(match id {
        "C2" => {
            let brute = set(u.iter().filter(|x| hq.contains(x)).cloned().collect());
            let two = f.int(2);
            let formula = set(h
                .iter()
                .filter(|x| !x.e11().is_zero())
                .map(|x| Mat2::unipotent(&(&two * x.e12()).div(x.e11()).unwrap()))
                .collect());
            verdict(brute == formula)
        }
        "C3" => {
            let central = |x: &&Mat2| x.is_scalar();
            let ok = h.iter().filter(|x| in_qt(x)).all(|x| central(&x))
                && u.iter().filter(|x| in_h(x)).all(|x| central(&x))
                && u.iter().filter(|x| in_qt(x)).all(|x| central(&x));
            verdict(ok)
        }
        "C4" => {
            let brute = set(h.iter().filter(|x| qu.contains(x)).cloned().collect());
            let formula = set(h.iter().filter(|x| !x.e11().is_zero()).cloned().collect());
            verdict(brute == formula)
        }
        "C5" => {
            let brute = set(qt.iter().filter(|x| hu.contains(x)).cloned().collect());
            let formula = set(qt.iter().filter(|x| !x.e11().is_zero()).cloned().collect());
            verdict(brute == formula)
        }
        "C6" => verdict(h.iter().all(|x| qu.contains(x)) == !(-&m).is_square()?),
        "C7" => verdict(qt.iter().all(|x| hu.contains(x)) == !m_sq),
        "C8" if m_sq => "Inapplicable",
        "C8" => verdict(hu.len() == g.len()),
        "C9" if !m_sq => "Inapplicable",
        "C9" => {
            let w = [Mat2::identity(f), Mat2::omega(f)];
            let hw: Vec<Mat2> = product(&h, &w).into_iter().collect();
            verdict(product(&hw, &u).len() == g.len())
        }
        _ => unreachable!(),
    })
}

// 9
fn claims_harness() -> Result<Outcome> {
    let st = run_claims(&default_sweep()?, None);
    let mut compared = 0;
    let mut replayed = 0;
    for s in &st {
        if let ClaimVerdict::Refuted { counterexample } = &s.verdict {
            if !replay(counterexample)? {
                return fail(format!("{} on {}: counterexample does not replay", s.claim_id, s.scope));
            }
            replayed += 1;
        }
    }
    for scope in default_sweep()?.iter().filter(|s| s.inv.m().is_some()) {
        let label = scope.label();
        let mine = |id: &str| st.iter().find(|s| s.claim_id == id && s.scope == label).unwrap();
        for id in ["C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9"] {
            let want = oracle(id, &scope.inv)?;
            let got = mine(id).verdict.label();
            if want != got {
                return fail(format!("{id} on {label}: harness {got}, oracle {want}"));
            }
            compared += 1;
        }
        for id in ["C10", "C11", "C16"] {
            if mine(id).verdict.label() != "Confirmed" {
                return fail(format!("{id} on {label}: {}", mine(id).verdict.label()));
            }
        }
    }
    pass(format!("{compared} verdicts match the independent oracle; C10, C11, C16 Confirmed on every odd scope; {replayed} Refuted verdicts replay"))
}

// 10
fn char2() -> Result<Outcome> {
    let mut n = 0;
    for q in [2u64, 4] {
        let f = Field::finite(q)?;
        let inv = make_tau0(&f)?;
        for g in sl2_elements(&f)? {
            let r = decompose_char2_finite(&g, &inv)?;
            r.validate(&g, &inv)?;
            let [a, _, c, d] = g.entries();
            let expected_h = if c.is_zero() {
                Mat2::unipotent(&(&a.square() + &(a * g.e12())))
            } else {
                Mat2::unipotent(&(&(a + c) + d).div(c)?)
            };
            if r.h != expected_h || r.h.mul(&r.w).mul(&r.q) != g {
                return fail(format!("{g} over F{q}: h = {}", r.h));
            }
            n += 1;
        }
    }
    let k = Field::rational_functions(2)?;
    let t = k.generator()?;
    let mut report = Vec::new();
    for m in [t.clone(), t.square(), &t + &k.one()] {
        let scope = Scope::new(&k, Some(&m))?;
        let s = run_claims(&[scope], Some(&["C17".to_string()])).remove(0);
        let ok = match &s.verdict {
            ClaimVerdict::Refuted { counterexample } => replay(counterexample)?,
            ClaimVerdict::Confirmed { .. } => true,
            _ => false,
        };
        if !ok {
            return fail(format!("C17 over {}: {}", s.scope, s.verdict.label()));
        }
        report.push(format!("m = {m}: {}", s.verdict.label()));
    }
    pass(format!(
        "{n} elements of SL2(F2), SL2(F4) factor by the formula; C17 over F2(t), budget 200 samples: {}",
        report.join(", ")
    ))
}

// 11
fn torus_partition() -> Result<Outcome> {
    let mut shown = Vec::new();
    for q in [5u64, 7, 9] {
        let f = Field::finite(q)?;
        let inv = tau(&f, &f.least_non_square().unwrap());
        let u = Universe::new(&inv)?;
        let orbits = torus_orbits(&u)?;
        let mut seen: HashSet<Mat2> = HashSet::new();
        for o in &orbits {
            let own: HashSet<&Mat2> = o.orbit.iter().collect();
            for x in &o.orbit {
                if !inv.in_extended_symmetric(x) {
                    return fail(format!("{x} in an orbit over F{q} is not tau-split"));
                }
                if u.h.iter().any(|h| !own.contains(&h.mul(x).mul(&h.inv().unwrap()))) {
                    return fail(format!("orbit of {} over F{q} is not H-stable", o.representative));
                }
                if !x.is_scalar() && !seen.insert(x.clone()) {
                    return fail(format!("{x} lies in two orbits over F{q}"));
                }
            }
        }
        let rest: Vec<&Mat2> = u.qt.iter().filter(|x| !x.is_scalar()).collect();
        if rest.len() != seen.len() || rest.iter().any(|x| !seen.contains(*x)) {
            return fail(format!("orbits miss part of Q~ over F{q}"));
        }
        shown.push(format!("F{q}: {} orbits cover {} + 2", orbits.len(), seen.len()));
    }
    pass(format!("{} (disjoint off +-Id)", shown.join("; ")))
}

/// Number, name, time budget where one is specified, check.
type Criterion = (u32, &'static str, Option<u64>, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "main decomposition over F3..F11", Some(30), main_decomposition),
        (2, "Q round-trip", Some(10), rational_round_trip),
        (3, "Q_p round-trip", Some(30), padic_round_trip),
        (4, "sqrt 5 example needs U", None, sqrt5_example),
        (5, "Q = Q~ and witnesses", None, q_equals_qtilde),
        (6, "diag(1/3, 3) over Q3", None, three_adic_diagonal),
        (7, "semisimplicity", None, semisimplicity),
        (8, "Hilbert symbol", Some(10), hilbert),
        (9, "claims harness", None, claims_harness),
        (10, "characteristic 2", None, char2),
        (11, "torus-orbit partition", None, torus_partition),
    ];
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        let start = Instant::now();
        let out = f().unwrap_or_else(|e| Outcome { ok: false, detail: format!("error {}: {e}", e.name()) });
        let took = start.elapsed();
        let in_time = budget.is_none_or(|b| took <= Duration::from_secs(b));
        let limit = budget.map_or(String::new(), |b| format!(", budget {b} s"));
        let ok = out.ok && in_time;
        failed += !ok as usize;
        println!(
            "criterion {n:>2} [{}] {name}: {} ({:.2} s{limit})",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria pass");
}
