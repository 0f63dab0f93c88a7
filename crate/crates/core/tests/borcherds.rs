mod common;

use borcherds_core::borcherds::{
    chamber_with_witness, choose_chamber, compute_i0, compute_i0_checked, find_roots,
    first_product_expansion, fj_expansion, local_borcherds_product, local_product_identity, psi0,
    psi0_product, product_expansion, theta_an, theta_translate_law_check, translation_law_check,
    vector_system_check, I0Route,
};
use borcherds_core::exactmath::{int, rat, CycRational, JacobiSeries, Rat};
use borcherds_core::lattice::{PosDefLattice, WittLattice};
use borcherds_core::modforms::{theta_translate, validate_form, VectorValuedForm};
use common::*;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn j_difference_through_grade_4() {
    let (l, f) = j744_form();
    let order = int(5);
    let r = fj_expansion(&f, &l, 4, &order).unwrap();
    assert_eq!(r.i0, int(-1));
    assert!(r.chamber.roots.is_empty());
    assert!(graded_covers(&r.psi, &order));
    assert!(r.psi.agrees_with(&j_difference_oracle(4, &order)));
    assert!(r.psi.grades[0].agrees_with(&JacobiSeries::one(0)));
}

#[test]
fn i0_values_and_routes() {
    let (l, f) = j744_form();
    assert_eq!(compute_i0_checked(&f, &l).unwrap(), int(-1));
    let (l, f) = gn_form();
    assert_eq!(compute_i0(&f, &l, I0Route::SigmaSum).unwrap(), rat(1, 2));
    assert_eq!(compute_i0(&f, &l, I0Route::E2ConstantTerm).unwrap(), rat(1, 2));
    let l = e8_cubed();
    let f = VectorValuedForm::eta_power(&l, -24).unwrap();
    assert_eq!(compute_i0(&f, &l, I0Route::SigmaSum).unwrap(), int(30));
    assert_eq!(compute_i0(&f, &l, I0Route::E2ConstantTerm).unwrap(), int(30));
    // Coxeter number of E8^3 is N2 / 24 with N2 = 720.
    let roots = find_roots(&f, &l).unwrap();
    assert_eq!(Rat::from_integer((roots.len() as i64).into()) / int(24), int(30));
}

#[test]
fn roots_and_chambers() {
    let (l, f) = gn_form();
    let c = choose_chamber(&f, &l).unwrap();
    assert_eq!(c.roots.len(), 2);
    let pos: Vec<_> = c.positive_roots().map(|r| r.x0.clone()).collect();
    assert_eq!(pos, vec![vec![rat(1, 2)]]);
    assert_eq!(c.positive_multiplicity(), int(1));
    assert!(chamber_with_witness(&f, &l, vec![Rat::zero()]).is_err());
    let l = e8_cubed();
    let f = VectorValuedForm::eta_power(&l, -24).unwrap();
    let c = choose_chamber(&f, &l).unwrap();
    assert_eq!(c.roots.len(), 720);
    assert_eq!(c.positive.len(), 360);
    for r in &c.roots {
        let neg: Vec<Rat> = r.x0.iter().map(|v| -v).collect();
        let i = c.roots.iter().position(|s| s.x0 == neg).unwrap();
        let here = c.roots.iter().position(|s| s.x0 == r.x0).unwrap();
        assert_ne!(c.positive.contains(&i), c.positive.contains(&here));
    }
}

#[test]
fn vector_system_identity() {
    let (l, f) = j744_form();
    assert!(vector_system_check(&f, &l).unwrap().equal);
    let (l, f) = gn_form();
    let v = vector_system_check(&f, &l).unwrap();
    assert!(v.equal);
    assert_eq!(v.lhs, vec![vec![int(2)]]);
    let l = e8_cubed();
    let f = VectorValuedForm::eta_power(&l, -24).unwrap();
    let v = vector_system_check(&f, &l).unwrap();
    assert!(v.equal, "{:?}", v.difference());
    let g = l.l0().gram();
    for i in 0..24 {
        for j in 0..24 {
            assert_eq!(v.rhs[i][j], int(60 * g[i][j]));
        }
    }
}

#[test]
fn vector_system_detects_a_broken_form() {
    // Doubling one root multiplicity of the GN table breaks the identity.
    let l = gn();
    let half = l.find(&[rat(1, 2)], [0, 0], [0, 0]).unwrap();
    let f = VectorValuedForm::from_table(
        "broken",
        rat(-1, 2),
        2,
        &[(half, rat(-1, 4), int(2)), (l.zero_id(), int(0), int(10))],
        Some(int(1)),
    )
    .unwrap();
    let v = vector_system_check(&f, &l).unwrap();
    assert!(!v.equal);
}

#[test]
fn theta_11_of_j_is_j() {
    let (l, f) = j744_form();
    let order = int(6);
    let th = theta_an(&f, &l, 1, 1, &order).unwrap();
    assert!(th.agrees_with(&j_oracle(&order)));
    assert!(covers(&th, &order));
}

#[test]
fn theta_of_zero_form_vanishes() {
    let l = gn();
    let f = VectorValuedForm::zero(&l, rat(-1, 2)).unwrap();
    assert!(theta_an(&f, &l, 2, 1, &int(4)).unwrap().is_zero());
}

#[test]
fn gn_theta_11_coefficients() {
    // Theta_{1,1} for phi01: coefficient of q^n X^{-l} is c(4n - l^2) with
    // c(-1) = 1, c(0) = 10, c(3) = -64, c(4) = 108 (keys X^{-G x0} = X^{-2 x0}).
    let (l, f) = gn_form();
    let th = theta_an(&f, &l, 1, 1, &int(2)).unwrap();
    let c = |n: i64, k: i64| th.coefficient(&int(n), &[int(k)]).as_rational().unwrap();
    assert_eq!([c(0, -1), c(0, 0), c(0, 1)], [int(1), int(10), int(1)]);
    assert_eq!([c(1, 2), c(1, 1), c(1, 0)], [int(10), int(-64), int(108)]);
}

#[test]
fn grade_one_sign_is_negative() {
    let (l, f) = j744_form();
    let order = int(6);
    let r = fj_expansion(&f, &l, 3, &order).unwrap();
    assert_eq!(polys_hold(&r, &f, &l, 3, &int(4), -1), vec![true; 3]);
    assert_eq!(polys_hold(&r, &f, &l, 1, &int(4), 1), vec![false]);
}

#[test]
fn gn_polynomial_relations() {
    let (l, f) = gn_form();
    let r = fj_expansion(&f, &l, 3, &int(4)).unwrap();
    assert_eq!(polys_hold(&r, &f, &l, 3, &int(1), -1), vec![true; 3]);
}

#[test]
fn routes_agree_for_gn() {
    let (l, f) = gn_form();
    let order = int(3);
    let r = fj_expansion(&f, &l, 2, &order).unwrap();
    let p = product_expansion(&f, &l, &r.chamber, 2, &order).unwrap();
    assert!(graded_covers(&r.psi, &order));
    assert!(p.psi.agrees_with(&r.psi), "{:?}", p.psi.first_difference(&r.psi));
    assert_eq!(p.phase, r.phase);
    assert_eq!(r.i0, rat(1, 2));
}

#[test]
fn first_product_starts_at_one() {
    let (l, f) = j744_form();
    let fp = first_product_expansion(&f, &l, 3, &int(4)).unwrap();
    assert!(fp.grades[0].agrees_with(&JacobiSeries::one(0)));
    // Grade 1 of prod (1 - q2 q1^b)^{c(b)} is -(j - 744)(tau1).
    assert!(fp.grades[1].agrees_with(&j_oracle(&int(4)).neg()));
}

#[test]
fn gn_psi0_is_eta_power_times_theta() {
    let (l, f) = gn_form();
    let order = int(6);
    let chamber = choose_chamber(&f, &l).unwrap();
    let (p0, phase) = psi0(&f, &l, &chamber, &order).unwrap();
    let u = p0.ratio_to(&gn_eta_theta(&order)).expect("proportional");
    assert!(u.root_of_unity_exponent().is_some_and(|e| (e * int(4)).is_integer()));
    let (unit, pure) = psi0_product(&f, &l, &chamber, &order).unwrap();
    assert_eq!(unit, phase);
    assert!(pure.scalar_mul(&unit).agrees_with(&p0));
    // Odd under w0 -> -w0.
    assert!(p0.negate_keys().agrees_with(&p0.neg()));
}

#[test]
fn chamber_independence_up_to_sign() {
    let (l, f) = gn_form();
    let order = int(4);
    let a = chamber_with_witness(&f, &l, vec![int(1)]).unwrap();
    let b = chamber_with_witness(&f, &l, vec![int(-3)]).unwrap();
    let (pa, _) = psi0(&f, &l, &a, &order).unwrap();
    let (pb, _) = psi0(&f, &l, &b, &order).unwrap();
    assert!(pa.agrees_with(&pb) || pa.agrees_with(&pb.neg()));
    let ra = product_expansion(&f, &l, &a, 2, &order).unwrap();
    let rb = product_expansion(&f, &l, &b, 2, &order).unwrap();
    let u = ra.psi.unit_ratio(&rb.psi).unwrap();
    assert!(u == CycRational::one() || u == -CycRational::one());
}

#[test]
fn leech_type_psi0_is_eta_24() {
    let (l, f) = leech_type();
    assert!(validate_form(&f, &l).is_ok());
    let r = fj_expansion(&f, &l, 2, &int(4)).unwrap();
    assert_eq!(r.i0, int(0));
    let eta24 = borcherds_core::modforms::eta_power(24, &int(4)).unwrap();
    assert!(r.psi.grades[0].agrees_with(&eta24));
    let p = product_expansion(&f, &l, &r.chamber, 2, &int(4)).unwrap();
    assert!(p.psi.agrees_with(&r.psi));
}

#[test]
fn level_n_lam2_variant_rescales_tau2() {
    // Inducing j - 744 to every lam2 with lam1 = 0 at level N multiplies I0 by
    // N^2 and substitutes q2 -> q2^{N^2} in the expansion.
    let (base, f) = j744_form();
    let order = int(3);
    let r1 = fj_expansion(&f, &base, 1, &order).unwrap();
    for n in [2u64, 3] {
        let t = WittLattice::new(PosDefLattice::rank_zero(), n).unwrap();
        let g = f.induce(&base, &t, |c| c.lam1 == [0, 0]).unwrap();
        assert!(validate_form(&g, &t).is_ok());
        let nn = (n * n) as usize;
        let r = fj_expansion(&g, &t, nn, &order).unwrap();
        assert_eq!(r.i0, int(-(nn as i64)));
        for k in 0..=nn {
            let expect = match k {
                0 => r1.psi.grades[0].clone(),
                k if k == nn => r1.psi.grades[1].clone(),
                _ => JacobiSeries::zero(0),
            };
            assert!(r.psi.grades[k].agrees_with(&expect), "N = {n}, grade {k}");
        }
        let p = product_expansion(&g, &t, &r.chamber, nn, &order).unwrap();
        assert!(p.psi.agrees_with(&r.psi));
    }
}

#[test]
fn level_n_lam1_variant_is_unchanged() {
    let (base, f) = j744_form();
    let order = int(3);
    let r1 = fj_expansion(&f, &base, 3, &order).unwrap();
    for n in [2u64, 3] {
        let t = WittLattice::new(PosDefLattice::rank_zero(), n).unwrap();
        let g = f.induce(&base, &t, |c| c.lam2 == [0, 0]).unwrap();
        assert!(validate_form(&g, &t).is_ok());
        let r = fj_expansion(&g, &t, 3, &order).unwrap();
        assert!(r.psi.agrees_with(&r1.psi));
        let p = product_expansion(&g, &t, &r.chamber, 3, &order).unwrap();
        assert!(p.psi.agrees_with(&r.psi));
    }
}

#[test]
fn local_product_identity_for_gn_roots() {
    let l = gn();
    for (x, l21, l22) in [
        (rat(1, 2), int(0), int(0)),
        (rat(-1, 2), int(0), int(0)),
        (int(1), rat(1, 3), rat(2, 5)),
        (rat(3, 2), rat(3, 4), rat(-1, 7)),
    ] {
        let c = local_product_identity(&l, std::slice::from_ref(&x), &l21, &l22, &int(10)).unwrap();
        assert!(c.holds(), "x0 = {x}: {:?}", c.first_difference);
        assert!(covers(&c.lhs, &int(10)) && covers(&c.rhs, &int(10)));
    }
}

#[test]
fn local_product_negation() {
    // Psi_{-x} with lam21 = 0 is Psi_x with X -> X^{-1}.
    let l = gn();
    let order = int(5);
    let p = local_borcherds_product(&l, &[rat(1, 2)], &int(0), &int(0), &order).unwrap();
    let m = local_borcherds_product(&l, &[rat(-1, 2)], &int(0), &int(0), &order).unwrap();
    assert!(p.negate_keys().agrees_with(&m));
    assert!(local_borcherds_product(&l, &[rat(1, 2)], &int(1), &int(0), &order).is_err());
}

#[test]
fn theta_translate_half_tau_structure() {
    // Theta1[tau/2](z) = alpha0 e(z/2 + tau/8) theta1(z + tau/2) with alpha0 = 1 at s2 = 0.
    let order = int(5);
    let t = theta_translate(&rat(1, 2), &Rat::zero(), &order);
    let raw = borcherds_core::borcherds::theta1_general(&[int(1)], &rat(1, 2), &Rat::zero(), &(order.clone() + int(1)));
    let front = JacobiSeries::monomial(1, &rat(1, 8), &[rat(1, 2)], CycRational::one());
    assert!(front.checked_mul(&raw).unwrap().truncate(&order).agrees_with(&t));
}

#[test]
fn translation_law_for_gn() {
    let (l, f) = gn_form();
    for (a, n) in [(1, 1), (1, 2)] {
        for b1 in [1i64, -1] {
            let c = translation_law_check(&f, &l, a, n, &[b1], &[0], &int(3)).unwrap();
            assert!(c.holds(), "{}: {:?}", c.name, c.first_difference);
            assert!(covers(&c.lhs, &int(3)) && covers(&c.rhs, &int(3)));
        }
    }
    let c = translation_law_check(&f, &l, 1, 1, &[1], &[1], &int(3)).unwrap();
    assert!(c.holds());
}

#[test]
fn truncated_translation_is_refused() {
    let s = JacobiSeries::one(1).truncate(&int(2));
    assert!(s.substitute_w0_translation(&[1], &[0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn theta_translate_lattice_law(n1 in -11i64..=11, d1 in 1i64..=6, n2 in -11i64..=11, d2 in 1i64..=6, which in 0usize..3) {
        let (a, b) = [(0, 1), (1, 0), (1, 1)][which];
        let c = theta_translate_law_check(&rat(n1, d1), &rat(n2, d2), a, b, &int(5));
        prop_assert!(c.holds(), "{}: {:?}", c.name, c.first_difference);
    }

    #[test]
    fn i0_is_a_multiple_of_one_24th(c0 in -30i64..=30, c1 in 0i64..=3) {
        // eta-quotient-like rank-0 tables: only the sigma sum can be evaluated on a
        // finite table, and it always lands in Z/24.
        let l = rank0();
        let f = VectorValuedForm::from_table("t", int(0), 1, &[(0, int(-1), int(c1)), (0, int(0), int(c0))], Some(int(1))).unwrap();
        let i0 = compute_i0(&f, &l, I0Route::SigmaSum).unwrap();
        prop_assert!((i0 * int(24)).is_integer());
    }
}
