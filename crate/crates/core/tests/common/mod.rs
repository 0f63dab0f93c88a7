#![allow(dead_code)]

use borcherds_core::borcherds::{theta_an, FJResult};
use borcherds_core::exactmath::{int, rat, CycRational, GradedFJSeries, JacobiSeries, Rat};
use borcherds_core::lattice::{PosDefLattice, WittLattice};
use borcherds_core::modforms::{classical_series, eta_power, theta1_sum, Classical, QSeries, VectorValuedForm};

pub fn rank0() -> WittLattice {
    WittLattice::unimodular_hyperbolic(PosDefLattice::rank_zero())
}

pub fn gn() -> WittLattice {
    WittLattice::unimodular_hyperbolic(PosDefLattice::a1_scaled(1))
}

pub fn e8_cubed() -> WittLattice {
    WittLattice::unimodular_hyperbolic(PosDefLattice::e8_cubed())
}

pub fn j744_form() -> (WittLattice, VectorValuedForm) {
    let l = rank0();
    let f = VectorValuedForm::j744(&l).unwrap();
    (l, f)
}

pub fn gn_form() -> (WittLattice, VectorValuedForm) {
    let l = gn();
    let f = VectorValuedForm::gn_phi01(&l).unwrap();
    (l, f)
}

/// `eta^-24` over a rank-0 `L0`: the constant term 24 mimics the Leech case.
pub fn leech_type() -> (WittLattice, VectorValuedForm) {
    let l = rank0();
    let f = VectorValuedForm::eta_power(&l, -24).unwrap().without_weight_check();
    (l, f)
}

/// `j - 744` as `E4^3 / Delta - 744` with `Delta = (E4^3 - E6^2) / 1728`.
pub fn j_oracle(order: &Rat) -> QSeries {
    let work = order + int(2);
    let e4 = classical_series(Classical::E4, &work).unwrap();
    let e6 = classical_series(Classical::E6, &work).unwrap();
    let e4c = e4.checked_mul(&e4).unwrap().checked_mul(&e4).unwrap();
    let delta = e4c
        .checked_sub(&e6.checked_mul(&e6).unwrap())
        .unwrap()
        .scale_rat(&rat(1, 1728));
    e4c.checked_mul(&delta.invert(&work).unwrap())
        .unwrap()
        .checked_sub(&JacobiSeries::constant(0, CycRational::from_int(744)))
        .unwrap()
        .truncate(order)
}

/// `j(tau2) - j(tau1) = q2^-1 (1 - (j - 744)(tau1) q2 + sum_{k>=2} c(k-1) q2^k)`
/// through grade `k` and `q1^order`.
pub fn j_difference_oracle(k: usize, order: &Rat) -> GradedFJSeries {
    let j = j_oracle(&(order.clone().max(int(k as i64 + 1))));
    let mut grades = vec![JacobiSeries::one(0).truncate(order)];
    if k >= 1 {
        grades.push(j.neg().truncate(order));
    }
    for g in 2..=k {
        let c = j.q_coefficient(&int(g as i64 - 1));
        grades.push(JacobiSeries::constant(0, c).truncate(order));
    }
    GradedFJSeries::new(int(-1), grades)
}

/// `eta^9 theta1(w0)`, i.e. `eta^10 theta1 / eta`, with the rank-1 key `t` of
/// `theta1` read as `X^t` on `<2>`.
pub fn gn_eta_theta(order: &Rat) -> JacobiSeries {
    let work = order + int(1);
    let eta9 = eta_power(9, &work).unwrap().lift_rank(1);
    eta9.checked_mul(&theta1_sum(&work)).unwrap().truncate(order)
}

/// `Psi_k / Psi_0` predicted by `exp(-sum q2^{an} Theta_{a,n} / n)` for `k <= 3`,
/// with the grade-1 sign `sign1` (`-1` is the exponential).
pub fn fj_poly(form: &VectorValuedForm, l: &WittLattice, k: usize, order: &Rat, sign1: i64) -> JacobiSeries {
    let th = |a: u64, n: u64| theta_an(form, l, a, n, order).unwrap();
    let t11 = th(1, 1);
    let mul = |a: &JacobiSeries, b: &JacobiSeries| a.checked_mul(b).unwrap();
    let add = |a: &JacobiSeries, b: &JacobiSeries| a.checked_add(b).unwrap();
    let sc = |a: &JacobiSeries, r: Rat| a.scale_rat(&r);
    let out = match k {
        1 => sc(&t11, int(sign1)),
        2 => {
            let t21 = th(2, 1);
            let t12 = th(1, 2);
            add(&add(&sc(&t21, int(-1)), &sc(&t12, rat(-1, 2))), &sc(&mul(&t11, &t11), rat(1, 2)))
        }
        3 => {
            let t31 = th(3, 1);
            let t13 = th(1, 3);
            let t21 = th(2, 1);
            let t12 = th(1, 2);
            let mut s = add(&sc(&t31, int(-1)), &sc(&t13, rat(-1, 3)));
            s = add(&s, &mul(&t11, &t21));
            s = add(&s, &sc(&mul(&t11, &t12), rat(1, 2)));
            add(&s, &sc(&mul(&mul(&t11, &t11), &t11), rat(-1, 6)))
        }
        _ => panic!("relations are spelled out through grade 3"),
    };
    out.truncate(order)
}

/// Whether `Psi_k = Psi_0 * relation_k` below `q1^order` for `k = 1..=top`;
/// `r` must be computed at least to `order + top m_max` so `Psi_0` covers the window.
pub fn polys_hold(r: &FJResult, form: &VectorValuedForm, l: &WittLattice, top: usize, order: &Rat, sign1: i64) -> Vec<bool> {
    let mm = form.m_max().unwrap_or_else(|| int(0)).max(int(0));
    (1..=top)
        .map(|k| {
            // The relation is known to `order + k m_max` before multiplying by Psi0.
            let rel = fj_poly(form, l, k, &(order + &mm * int(k as i64) + int(1)), sign1);
            let lhs = r.psi.grades[0].checked_mul(&rel).unwrap().truncate(order);
            let rhs = r.psi.grades[k].truncate(order);
            covers(&lhs, order) && covers(&rhs, order) && lhs.agrees_with(&rhs)
        })
        .collect()
}

/// The series is known at least below `q1^order`.
pub fn covers(s: &JacobiSeries, order: &Rat) -> bool {
    s.trunc().is_none_or(|t| &t >= order)
}

pub fn graded_covers(g: &GradedFJSeries, order: &Rat) -> bool {
    g.grades.iter().all(|s| covers(s, order))
}
