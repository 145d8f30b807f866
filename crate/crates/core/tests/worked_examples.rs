//! Small hand-checked examples, frozen.

use sl2_decomp::census::{census_report, run_claims, ClaimVerdict, Scope};
use sl2_decomp::decomp::{decompose_char2_finite, decompose_hqu, decompose_hu, requires_unipotent, Branch};
use sl2_decomp::fields::{parse_field, Field, SquareClassLabel};
use sl2_decomp::involution::{involution_from_matrix, make_tau0, parse_involution};
use sl2_decomp::mat2::{bruhat_factor, is_semisimple, parse_mat, BruhatForm, Mat2};
use sl2_decomp::symspace::{construct_nonsemisimple_in_q, q_equals_qtilde, witness_in_q};

fn mat(f: &Field, s: &str) -> Mat2 {
    parse_mat(f, s).unwrap()
}

/// `e11 = e22` and `e21 = m e12`.
fn in_h(g: &Mat2, m: i64) -> bool {
    let f = g.field();
    g.is_sl2() && g.e11() == g.e22() && *g.e21() == &f.int(m) * g.e12()
}

/// `e21 = -m e12`.
fn in_qt(g: &Mat2, m: i64) -> bool {
    let f = g.field();
    g.is_sl2() && *g.e21() == -(&f.int(m) * g.e12())
}

#[test]
fn weyl_element_under_tau_1() {
    let f = Field::rationals();
    let inv = parse_involution(&f, "tau(1)").unwrap();
    let g = Mat2::omega(&f);
    let r = decompose_hqu(&g, &inv).unwrap();
    assert_eq!(r.branch, Branch::BigCellAlphaZero);
    // the fixed point [[-5/3,-4/3],[-4/3,-5/3]] enters inverted
    assert_eq!(r.h, mat(&f, "-5/3,-4/3;-4/3,-5/3").inv().unwrap());
    assert_eq!(r.q, mat(&f, "4/3,-5/3;5/3,-4/3"));
    assert!(r.u.is_identity());
    assert!(in_h(&r.h, 1) && in_qt(&r.q, 1));
    assert_eq!(r.h.mul(&r.q), g);
    assert_eq!(inv.apply(&g).unwrap(), mat(&f, "0,-1;1,0"));
}

#[test]
fn lower_triangular_under_tau_2() {
    let f = Field::rationals();
    let inv = parse_involution(&f, "tau(2)").unwrap();
    let g = mat(&f, "-1,0;-1,-1");
    let r = decompose_hqu(&g, &inv).unwrap();
    assert_eq!(r.branch, Branch::BigCellAlphaNonzero);
    assert!(r.h.is_identity());
    assert_eq!(r.q, mat(&f, "-1,1/2;-1,-1/2"));
    // u^-1 carries -1/2, the inverse of what multiplies g on the right
    assert_eq!(r.u.inv().unwrap(), Mat2::unipotent(&f.ratio(-1, 2).unwrap()));
    assert!(in_qt(&r.q, 2));
    assert_eq!(r.q.mul(&r.u), g);
}

#[test]
fn borel_case() {
    let f = Field::rationals();
    let inv = parse_involution(&f, "tau(1)").unwrap();
    let g = mat(&f, "2,3;0,1/2");
    let r = decompose_hqu(&g, &inv).unwrap();
    assert!(r.h.is_identity());
    assert_eq!(r.q, mat(&f, "2,0;0,1/2"));
    assert_eq!(r.u, mat(&f, "1,3/2;0,1"));
    assert_eq!(
        bruhat_factor(&g).unwrap(),
        BruhatForm::Borel { t: f.int(2), u1: f.ratio(3, 2).unwrap() }
    );
    let one = f.one();
    assert_eq!(
        bruhat_factor(&mat(&f, "-1,1;-1,0")).unwrap(),
        BruhatForm::BigCell { a: one.clone(), alpha: one.clone(), b: one, beta: f.zero() }
    );
}

#[test]
fn symmetric_non_member_of_h_u() {
    let f = Field::rationals();
    let inv = parse_involution(&f, "tau(-1)").unwrap();
    let q = mat(&f, "2,1;1,1");
    assert!(in_qt(&q, -1));
    assert!(decompose_hu(&q, &inv).unwrap().is_no());
    assert!(requires_unipotent(&q, &inv).unwrap().is_yes());
}

#[test]
fn root_five_needs_a_unipotent() {
    let f = parse_field("Q(sqrt(5))").unwrap();
    let inv = parse_involution(&f, "tau(1)").unwrap();
    let s = &f.generator().unwrap() - &f.int(3);
    let g = Mat2::new(f.one(), f.int(2).div(&s).unwrap(), s.div(&f.int(2)).unwrap(), f.int(2)).unwrap();
    assert!(g.is_sl2());
    assert!(requires_unipotent(&g, &inv).unwrap().is_no());
}

#[test]
fn three_adic_square_classes() {
    let f = parse_field("Q3").unwrap();
    let c = f.square_class(&f.int(6)).unwrap();
    assert_eq!(c.rep, f.int(-3));
    assert_eq!(c.label, Some(SquareClassLabel::PNp));
    assert!(!f.int(6).is_square().unwrap());

    let inv = parse_involution(&f, "tau(3)").unwrap();
    let q = Mat2::diag(&f.ratio(1, 3).unwrap(), &f.int(3));
    assert!(inv.in_extended_symmetric(&q));
    assert!(witness_in_q(&q, &inv, None).unwrap().verdict.is_no());
    assert!(matches!(q_equals_qtilde(&inv).verdict, ClaimVerdict::Refuted { .. }));
}

#[test]
fn nonsemisimple_symmetric_element() {
    let f = Field::rationals();
    let inv = parse_involution(&f, "tau(1)").unwrap();
    let q = construct_nonsemisimple_in_q(&inv, &f.zero()).unwrap();
    assert_eq!(q, mat(&f, "3,2;-2,-1"));
    assert!(q.char_poly_disc().is_zero());
    assert!(!is_semisimple(&q).unwrap());
    assert_eq!(construct_nonsemisimple_in_q(&inv, &f.int(2)).unwrap(), mat(&f, "7,6;-6,-5"));

    let f5 = Field::prime(5).unwrap();
    let inv5 = parse_involution(&f5, "tau(1)").unwrap();
    assert_eq!(construct_nonsemisimple_in_q(&inv5, &f5.one()).unwrap(), mat(&f5, "0,4;1,2"));
}

#[test]
fn involution_normal_forms() {
    let f5 = Field::prime(5).unwrap();
    let nf = involution_from_matrix(&mat(&f5, "1,2;3,-1")).unwrap();
    assert_eq!(nf.involution.to_string(), "tau(2)");
    let q = Field::rationals();
    let nf = involution_from_matrix(&mat(&q, "1,0;0,-1")).unwrap();
    assert_eq!(nf.involution.to_string(), "tau(1)");
}

fn sizes(field: &str, inv: &str) -> Vec<(String, usize)> {
    let f = parse_field(field).unwrap();
    let inv = parse_involution(&f, inv).unwrap();
    census_report(&inv).unwrap().sizes.into_iter().collect()
}

fn size(all: &[(String, usize)], k: &str) -> usize {
    all.iter().find(|(n, _)| n == k).unwrap().1
}

#[test]
fn census_sizes() {
    let s = sizes("F3", "tau(1)");
    assert_eq!((size(&s, "G"), size(&s, "H"), size(&s, "Q~"), size(&s, "U")), (24, 2, 12, 3));
    let s = sizes("F5", "tau(2)");
    assert_eq!((size(&s, "H"), size(&s, "Q~")), (6, 20));
    assert_eq!(size(&sizes("F5", "tau(1)"), "Q~"), 30);
    let s = sizes("F7", "tau(3)");
    assert_eq!((size(&s, "G"), size(&s, "H"), size(&s, "Q"), size(&s, "Q~")), (336, 8, 42, 42));
    let s = sizes("F4", "tau0");
    assert_eq!((size(&s, "G"), size(&s, "H"), size(&s, "Q"), size(&s, "Q~")), (60, 4, 15, 16));
}

#[test]
fn claim_verdicts() {
    let f7 = Field::prime(7).unwrap();
    let s = run_claims(&[Scope::new(&f7, Some(&f7.one())).unwrap()], Some(&["C1".to_string()]));
    assert!(matches!(s[0].verdict, ClaimVerdict::Confirmed { .. }));

    let f5 = Field::prime(5).unwrap();
    let ids = ["C8".to_string(), "C12".to_string()];
    let s = run_claims(&[Scope::new(&f5, Some(&f5.int(2))).unwrap()], Some(&ids));
    assert!(matches!(s[0].verdict, ClaimVerdict::Refuted { .. }), "{:?}", s[0]);
    assert!(matches!(s[1].verdict, ClaimVerdict::Confirmed { .. }), "{:?}", s[1]);
}

#[test]
fn characteristic_two() {
    let f2 = Field::prime(2).unwrap();
    let inv = make_tau0(&f2).unwrap();
    let u = mat(&f2, "1,1;0,1");
    assert_eq!(inv.apply(&u).unwrap(), u);
    for g in ["1,1;1,0", "1,1;0,1"] {
        let g = mat(&f2, g);
        let r = decompose_char2_finite(&g, &inv).unwrap();
        r.validate(&g, &inv).unwrap();
        assert_eq!(r.product(), g);
    }
    let f4 = Field::finite(4).unwrap();
    let inv = make_tau0(&f4).unwrap();
    let id = Mat2::identity(&f4);
    let r = decompose_char2_finite(&id, &inv).unwrap();
    r.validate(&id, &inv).unwrap();
}
