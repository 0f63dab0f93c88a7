mod common;

use borcherds_core::borcherds::{choose_chamber, fj_expansion, psi0};
use borcherds_core::exactmath::{int, rat, CycRational};
use borcherds_core::lattice::{PosDefLattice, WittLattice};
use borcherds_core::modforms::VectorValuedForm;
use borcherds_core::weyl::{
    b_factor_2, b_factor_3, b_factor_4, borcherds_side_product, borcherds_side_product_with_rho,
    borcherds_unit, positive_roots_in_window, select_chamber_witness, weyl_constants, weyl_vector,
    weyl_vector_half_index,
};
use common::*;
use num_traits::Zero;

#[test]
fn constants() {
    let (l, f) = j744_form();
    assert_eq!(weyl_constants(&f, &l).unwrap(), (int(1), int(0)));
    let (l, f) = leech_type();
    assert_eq!(weyl_constants(&f, &l).unwrap(), (int(1), int(0)));
    let l = e8_cubed();
    let f = VectorValuedForm::eta_power(&l, -24).unwrap();
    // 720 roots, each with c(-1) = 1.
    assert_eq!(weyl_constants(&f, &l).unwrap(), (int(1), int(360)));
    assert_eq!(borcherds_unit(&int(360)), CycRational::one());
    assert_eq!(borcherds_unit(&int(1)), -CycRational::one());
}

#[test]
fn empty_principal_part_is_refused() {
    let l = rank0();
    let f = VectorValuedForm::from_table("c", int(0), 1, &[(l.zero_id(), int(0), int(24))], Some(int(3)))
        .unwrap()
        .without_weight_check();
    assert!(weyl_constants(&f, &l).is_err());
}

#[test]
fn non_unimodular_lattice_is_refused() {
    let (l, f) = gn_form();
    assert!(weyl_constants(&f, &l).is_err());
    let t = WittLattice::new(PosDefLattice::rank_zero(), 2).unwrap();
    let (base, j) = j744_form();
    let g = j.induce(&base, &t, |c| c.lam2 == [0, 0]).unwrap();
    assert!(weyl_constants(&g, &t).is_err());
}

#[test]
fn witness_and_weyl_vector_for_j() {
    let (l, f) = j744_form();
    let ch = choose_chamber(&f, &l).unwrap();
    let w = select_chamber_witness(&f, &l, &ch).unwrap();
    assert_eq!(w.witness_y.0, int(7));
    assert_eq!(w.witness_y.2, int(1));
    // rho00 = (c(0) + 2B)/24 e1 - I0 e1' = e1' for j - 744.
    let rho = weyl_vector(&f, &l, &ch).unwrap();
    assert_eq!((rho.e1.clone(), rho.e1p.clone()), (int(0), int(1)));
    let half = weyl_vector_half_index(&f, &l, &ch).unwrap();
    assert_eq!(half.e1p, rat(1, 2));
    assert_eq!(half.e1, rho.e1);
}

#[test]
fn weyl_vector_for_leech_type() {
    let (l, f) = leech_type();
    let ch = choose_chamber(&f, &l).unwrap();
    let rho = weyl_vector(&f, &l, &ch).unwrap();
    // c(0) = 24, B = 0, I0 = 0.
    assert_eq!((rho.e1, rho.e1p), (int(1), int(0)));
}

#[test]
fn e8_cubed_weyl_vector() {
    // c(0) = 24 and B = 360 give (24 + 720) / 24 = 31; (rho0, x0) >= 1 on positive roots.
    let l = e8_cubed();
    let f = VectorValuedForm::eta_power(&l, -24).unwrap();
    let ch = choose_chamber(&f, &l).unwrap();
    let rho = weyl_vector(&f, &l, &ch).unwrap();
    assert_eq!(rho.e1, int(31));
    assert_eq!(rho.e1p, int(-30));
    let l0 = l.l0();
    for r in ch.positive_roots() {
        assert!(l0.gram_pair(&rho.x0, &r.x0).unwrap() >= int(1));
    }
    // Freudenthal-de Vries: |rho|^2 = h (h + 1) rank / 12 per component, h = 30.
    assert_eq!(l0.gram_pair(&rho.x0, &rho.x0).unwrap(), int(3 * 620));
}

#[test]
fn product_matches_expansion_with_unit_one() {
    for (l, f) in [j744_form(), leech_type()] {
        let order = int(4);
        let ch = choose_chamber(&f, &l).unwrap();
        let w = select_chamber_witness(&f, &l, &ch).unwrap();
        let r = fj_expansion(&f, &l, 3, &order).unwrap();
        let p = borcherds_side_product(&f, &l, &w, 3, &order).unwrap();
        assert!(graded_covers(&p, &order) && graded_covers(&r.psi, &order));
        assert_eq!(p.offset, r.psi.offset);
        assert!(p.agrees_with(&r.psi));
    }
}

#[test]
fn literal_half_index_misplaces_tau2() {
    let (l, f) = j744_form();
    let ch = choose_chamber(&f, &l).unwrap();
    let w = select_chamber_witness(&f, &l, &ch).unwrap();
    let half = weyl_vector_half_index(&f, &l, &ch).unwrap();
    let p = borcherds_side_product_with_rho(&f, &l, &w, &half, 2, &int(3)).unwrap();
    assert_eq!(p.offset, rat(-1, 2));
    assert_eq!(fj_expansion(&f, &l, 2, &int(3)).unwrap().psi.offset, int(-1));
}

#[test]
fn grade_zero_factors_recombine() {
    // Grade 0 of the product is B4 * B3 * B2 and equals Psi0 times the unit.
    for (l, f) in [j744_form(), leech_type()] {
        let order = int(5);
        let ch = choose_chamber(&f, &l).unwrap();
        let w = select_chamber_witness(&f, &l, &ch).unwrap();
        let work = &order + int(2);
        let b = b_factor_4(&w, &l)
            .checked_mul(&b_factor_3(&f, &l, &ch, &work).unwrap())
            .unwrap()
            .checked_mul(&b_factor_2(&f, &l, &w.m_max, &work).unwrap())
            .unwrap()
            .truncate(&order);
        let (p0, _) = psi0(&f, &l, &ch, &order).unwrap();
        assert!(covers(&b, &order));
        let u = b.ratio_to(&p0).expect("proportional");
        assert_eq!(u, borcherds_unit(&w.b));
    }
}

#[test]
fn positive_roots_do_not_depend_on_y2_scale() {
    let (l, f) = leech_type();
    let ch = choose_chamber(&f, &l).unwrap();
    let w = select_chamber_witness(&f, &l, &ch).unwrap();
    let base = positive_roots_in_window(&f, &l, &w, 2, &int(3)).unwrap();
    assert!(!base.is_empty());
    for y2 in [int(14), int(100)] {
        let moved = w.with_y2(y2);
        assert_eq!(positive_roots_in_window(&f, &l, &moved, 2, &int(3)).unwrap(), base);
    }
    // Every positive root has a >= 0, and a = 0 forces b > 0 in rank 0.
    for (r, c) in &base {
        assert!(r.a > 0 || (r.a == 0 && r.b > 0));
        assert!(!c.is_zero());
    }
}

#[test]
fn root_norms_follow_the_principal_part() {
    let (l, f) = j744_form();
    let ch = choose_chamber(&f, &l).unwrap();
    let w = select_chamber_witness(&f, &l, &ch).unwrap();
    for (r, c) in positive_roots_in_window(&f, &l, &w, 2, &int(3)).unwrap() {
        let q = r.vector().q(&l).unwrap();
        assert_eq!(q, -int(r.a * r.b));
        assert_eq!(c, f.coefficient(l.zero_id(), &-q).unwrap());
    }
}
