use num_rational::BigRational;
use proptest::prelude::*;

use sl2_decomp::census::{replay, run_claims, Counterexample, Scope};
use sl2_decomp::cli::run;
use sl2_decomp::decomp::{decompose_hqu, decompose_hu, decompose_reordered, requires_unipotent, FactorOrder};
use sl2_decomp::fields::{hilbert_symbol, parse_elem, Field, Place};
use sl2_decomp::involution::make_involution;
use sl2_decomp::mat2::{parse_mat, Mat2};
use sl2_decomp::symspace::{is_witness, witness_in_q};

fn q() -> Field {
    Field::rationals()
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-40i64..=40, 1i64..=9)
}

fn nonzero_int() -> impl Strategy<Value = i64> {
    prop_oneof![-12i64..=-1, 1i64..=12]
}

/// `SL2(Q)` as `u(a) l(b) u(c) diag(t, 1/t)`.
fn sl2_q() -> impl Strategy<Value = Mat2> {
    (small_rational(), small_rational(), small_rational(), nonzero_int(), 1i64..=5).prop_map(
        |(a, b, c, tn, td)| {
            let f = q();
            let e = |(n, d): (i64, i64)| f.ratio(n, d).unwrap();
            let t = f.ratio(tn, td).unwrap();
            let lower = Mat2::new(f.one(), f.zero(), e(b), f.one()).unwrap();
            Mat2::unipotent(&e(a))
                .mul(&lower)
                .mul(&Mat2::unipotent(&e(c)))
                .mul(&Mat2::diag(&t, &t.inv().unwrap()))
        },
    )
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finite_field_axioms(q in prop::sample::select(vec![5u64, 9, 16, 25, 27]), i in 0u64..1000, j in 0u64..1000, k in 0u64..1000) {
        let f = Field::finite(q).unwrap();
        let (a, b, c) = (f.from_index(i % q), f.from_index(j % q), f.from_index(k % q));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn elements_print_and_parse_back(n in -500i64..500, d in 1i64..60, spec in prop::sample::select(vec!["Q", "Qp(5,20)", "Qp(3,12)", "Q(sqrt(2))", "F3(t)", "F9", "F7"])) {
        let f = sl2_decomp::fields::parse_field(spec).unwrap();
        let x = match f.ratio(n, d) {
            Ok(x) => x,
            Err(_) => return Ok(()),
        };
        let y = if f.is_finite() { x.clone() } else { &x + &(&x * &x) };
        for e in [x, y] {
            prop_assert_eq!(parse_elem(&f, &e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn determinant_is_multiplicative(g in sl2_q(), h in sl2_q()) {
        let gh = g.mul(&h);
        prop_assert!(gh.is_sl2());
        prop_assert!(g.mul(&g.inv().unwrap()).is_identity());
        prop_assert_eq!(parse_mat(&q(), &gh.to_string()).unwrap(), gh);
    }

    #[test]
    fn tau_is_an_involutive_automorphism(g in sl2_q(), h in sl2_q(), m in nonzero_int()) {
        let f = q();
        let inv = make_involution(&f, &f.int(m)).unwrap();
        let tg = inv.apply(&g).unwrap();
        prop_assert_eq!(inv.apply(&tg).unwrap(), g.clone());
        prop_assert_eq!(inv.apply(&g.mul(&h)).unwrap(), tg.mul(&inv.apply(&h).unwrap()));
        prop_assert_eq!(inv.in_extended_symmetric(&g), inv.in_extended_symmetric_direct(&g));
    }

    #[test]
    fn decomposition_round_trips_in_every_order(g in sl2_q(), m in nonzero_int()) {
        let f = q();
        let inv = make_involution(&f, &f.int(m)).unwrap();
        for order in FactorOrder::SIX {
            let r = decompose_reordered(&g, &inv, order).unwrap();
            r.validate(&g, &inv).unwrap();
            prop_assert_eq!(r.product(), g.clone());
        }
    }

    #[test]
    fn finite_decomposition(q in prop::sample::select(vec![3u64, 5, 7, 9, 13, 25]), idx in 0usize..100_000, nonsq in any::<bool>()) {
        let f = Field::finite(q).unwrap();
        let m = if nonsq { f.least_non_square().unwrap() } else { f.one() };
        let inv = make_involution(&f, &m).unwrap();
        let els = sl2_decomp::census::sl2_elements(&f).unwrap();
        let g = &els[idx % els.len()];
        let r = decompose_hqu(g, &inv).unwrap();
        r.validate(g, &inv).unwrap();
    }

    #[test]
    fn symmetric_images_have_witnesses(g in sl2_q(), m in prop::sample::select(vec![1i64, -1, 2, 3, 4, -3, 5])) {
        let f = q();
        let inv = make_involution(&f, &f.int(m)).unwrap();
        let qm = inv.symmetric_image(&g).unwrap();
        prop_assert!(inv.in_extended_symmetric(&qm));
        let r = witness_in_q(&qm, &inv, None).unwrap();
        prop_assert!(!r.verdict.is_no(), "{} has a witness {} but got No", qm, g);
        if let Some(w) = r.witness() {
            prop_assert!(is_witness(w, &qm, &inv).unwrap());
        }
    }

    #[test]
    fn products_h_q_need_no_unipotent(g in sl2_q(), m in nonzero_int(), a in small_rational()) {
        let f = q();
        let inv = make_involution(&f, &f.int(m)).unwrap();
        let qm = inv.symmetric_image(&g).unwrap();
        prop_assert!(requires_unipotent(&qm, &inv).unwrap().is_yes());
        let h = inv.nontrivial_fixed_point().unwrap();
        prop_assert!(requires_unipotent(&h.mul(&qm), &inv).unwrap().is_yes());
        let u = Mat2::unipotent(&f.ratio(a.0, a.1).unwrap());
        let v = decompose_hu(&h.mul(&u), &inv).unwrap();
        prop_assert_eq!(v.witness().cloned(), Some((h, u)));
    }

    #[test]
    fn hilbert_symbol_identities(a in nonzero_int(), b in nonzero_int(), c in nonzero_int(), d in 1i64..20, p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        let (a, b, c) = (rat(a, d), rat(b, 1), rat(c, 1));
        for v in [Place::Infinity, Place::Prime(p)] {
            let ab = hilbert_symbol(&a, &b, &v).unwrap();
            prop_assert_eq!(ab, hilbert_symbol(&b, &a, &v).unwrap());
            prop_assert_eq!(hilbert_symbol(&a, &(&b * &c), &v).unwrap(), ab * hilbert_symbol(&a, &c, &v).unwrap());
            prop_assert_eq!(hilbert_symbol(&a, &(&b * &c * &c), &v).unwrap(), ab);
            prop_assert_eq!(hilbert_symbol(&a, &-&a, &v).unwrap(), 1);
        }
    }

    #[test]
    fn square_classes_ignore_squares(x in nonzero_int(), y in nonzero_int(), spec in prop::sample::select(vec!["Q", "Q3", "Q2", "F11", "F25"])) {
        let f = sl2_decomp::fields::parse_field(spec).unwrap();
        let (x, y) = (f.int(x), f.int(y));
        if x.is_zero() || y.is_zero() {
            return Ok(());
        }
        let c = f.square_class(&x).unwrap();
        prop_assert!(f.same_square_class(&x, &(&x * &y.square())).unwrap());
        prop_assert!(x.div(&c.rep).unwrap().is_square().unwrap());
    }

    #[test]
    fn semisimplicity_is_conjugation_invariant(q in prop::sample::select(vec![5u64, 7, 9]), i in 0usize..10_000, j in 0usize..10_000) {
        let f = Field::finite(q).unwrap();
        let els = sl2_decomp::census::sl2_elements(&f).unwrap();
        let (g, c) = (&els[i % els.len()], &els[j % els.len()]);
        let conj = c.conjugate(g).unwrap();
        prop_assert_eq!(
            sl2_decomp::mat2::is_semisimple(g).unwrap(),
            sl2_decomp::mat2::is_semisimple(&conj).unwrap()
        );
    }
}

#[test]
fn same_request_same_bytes() {
    let calls: [&[&str]; 4] = [
        &["sl2", "census", "--field", "F7", "--m", "3", "--format", "json"],
        &["sl2", "verify-claims", "--q", "5,7", "--claims", "C5,C8,C14"],
        &["sl2", "witness", "--field", "Q5", "--m", "2", "--mat", "4,0;0,1/4", "--format", "json"],
        &["sl2", "decompose", "--field", "F9", "--m", "[1,1]", "--mat", "0,1;2,0", "--order", "UQH"],
    ];
    for args in calls {
        let a = run(args.iter().copied());
        let b = run(args.iter().copied());
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn counterexamples_survive_serialization() {
    let f = Field::finite(7).unwrap();
    let scope = Scope::new(&f, f.least_non_square().as_ref()).unwrap();
    for s in run_claims(&[scope], None) {
        if let sl2_decomp::census::ClaimVerdict::Refuted { counterexample } = s.verdict {
            let text = serde_json::to_string(&counterexample).unwrap();
            let back: Counterexample = serde_json::from_str(&text).unwrap();
            assert_eq!(back, counterexample);
            assert!(replay(&back).unwrap(), "{text}");
        }
    }
}

#[test]
fn tampered_counterexamples_do_not_replay() {
    let f = Field::finite(5).unwrap();
    let scope = Scope::new(&f, Some(&f.int(2))).unwrap();
    let s = run_claims(&[scope], Some(&["C8".to_string()])).remove(0);
    let sl2_decomp::census::ClaimVerdict::Refuted { mut counterexample } = s.verdict else {
        panic!("C8 should be refuted over F5 with m = 2");
    };
    // the identity is in H U
    counterexample.matrix = Some("1,0;0,1".into());
    assert!(!replay(&counterexample).unwrap());
}
