//! The weak Jacobi form `phi_{0,1}` and its theta decomposition.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::rational::{ceil_i64, int, rat, Rat};
use crate::exactmath::{CycRational, JacobiSeries};

use super::classical::QSeries;

fn theta_sum<F>(shift: Rat, sign: F, order: &Rat) -> JacobiSeries
where
    F: Fn(i64) -> i64,
{
    let bound = ceil_i64(&(int(2) * order).max(int(1))) + 2;
    let terms = (-bound..=bound).filter_map(|n| {
        let t = int(n) + &shift;
        let e = &t * &t / int(2);
        (&e < order).then(|| (e, vec![t], CycRational::from_int(sign(n))))
    });
    JacobiSeries::from_terms(1, terms, Some(order.clone()))
}

/// `phi_{0,1}(tau, z) = 4 sum_{i=2,3,4} (theta_i(z) / theta_i(0))^2` through `order`.
pub fn phi01(order: &Rat) -> Result<JacobiSeries> {
    let work = order + int(1);
    let thetas = [
        theta_sum(rat(1, 2), |_| 1, &work),
        theta_sum(Rat::zero(), |_| 1, &work),
        theta_sum(Rat::zero(), |n| if n % 2 == 0 { 1 } else { -1 }, &work),
    ];
    let mut acc = JacobiSeries::zero(1);
    for th in &thetas {
        let sq = th.checked_mul(th)?;
        let at0 = th.sum_over_keys();
        let inv = at0.checked_mul(&at0)?.invert(order)?;
        acc = acc.checked_add(&sq.checked_mul(&inv.lift_rank(1))?)?;
    }
    Ok(acc.scale_rat(&int(4)).truncate(order))
}

/// Components `(F0, F1)` over `<2>` with `c(n, r) = F_{r mod 2}(n - r^2/4)`, through `order`.
pub fn phi01_components(order: &Rat) -> Result<(QSeries, QSeries)> {
    // F1(m) needs c(m + 1/4, 1); c(n, r) with n < order + 1 covers every m < order.
    let phi = phi01(&(order + int(1)))?;
    let mut comps: [BTreeMap<Rat, Rat>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for t in phi.terms() {
        let r = t.key[0].clone();
        let c = t.coeff.as_rational().ok_or_else(|| {
            Error::Consistency(format!("non-rational phi01 coefficient at q^{}", t.exp))
        })?;
        let ri = r.to_integer();
        let parity = if (&ri % 2u8).is_zero() { 0 } else { 1 };
        let m = &t.exp - &r * &r / int(4);
        match comps[parity].get(&m) {
            Some(prev) if prev != &c => {
                return Err(Error::Consistency(format!(
                    "theta decomposition residual at n = {}, r = {}: {} vs {}",
                    t.exp, r, c, prev
                )))
            }
            _ => {
                comps[parity].insert(m, c);
            }
        }
    }
    let [f0, f1] = comps;
    let mk = |m: BTreeMap<Rat, Rat>| {
        QSeries::from_q_terms(m.into_iter().filter(|(e, _)| e < order), Some(order.clone()))
    };
    let (f0, f1) = (mk(f0), mk(f1));
    check_residual(&phi, &f0, &f1, &(order + int(1)))?;
    Ok((f0, f1))
}

/// Verify `c(n, r) = F_{r mod 2}(n - r^2/4)` for every `(n, r)` that both sides know.
fn check_residual(phi: &JacobiSeries, f0: &QSeries, f1: &QSeries, phi_order: &Rat) -> Result<()> {
    let f_order = f0.trunc().expect("truncated components");
    let lowest = Rat::from_integer((-1).into()) / int(4);
    // All r with n - r^2/4 >= -1/4 and n < phi_order.
    let rmax = ceil_i64(&(int(4) * phi_order + int(1))).max(1);
    let mut n = Rat::zero();
    while &n < phi_order {
        for r in -rmax..=rmax {
            let m = &n - int(r * r) / int(4);
            if m < lowest || m >= f_order {
                continue;
            }
            let f = if r.rem_euclid(2) == 0 { f0 } else { f1 };
            let want = f.q_coefficient_rat(&m);
            let got = phi.coefficient(&n, &[int(r)]);
            if got != CycRational::from_rat(want.clone()) {
                return Err(Error::Consistency(format!(
                    "theta decomposition residual at n = {n}, r = {r}: {got} vs {want}"
                )));
            }
        }
        n += Rat::one();
    }
    Ok(())
}
