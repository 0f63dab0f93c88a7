//! The odd Jacobi theta function and its normalized translates.
//!
//! All series here have rank 1: a key `t` stands for `e(t z)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::rational::{ceil_i64, floor_i64, int, rat, to_f64, Rat};
use crate::exactmath::{CycRational, JacobiSeries};

/// Integers `n` with `(n + c)^2 / 2 < order`.
fn shifted_range(c: &Rat, order: &Rat) -> Vec<i64> {
    if order <= &Rat::zero() {
        return Vec::new();
    }
    let r = (2.0 * to_f64(order)).sqrt();
    let cf = to_f64(c);
    let lo = floor_i64(&Rat::from_float(-r - cf).unwrap_or_else(Rat::zero)) - 1;
    let hi = ceil_i64(&Rat::from_float(r - cf).unwrap_or_else(Rat::zero)) + 1;
    (lo..=hi)
        .filter(|&n| {
            let t = int(n) + c;
            &(&t * &t / int(2)) < order
        })
        .collect()
}

/// `Theta1[s](z) = alpha0(s) e(s1 z + s1^2 tau / 2) theta1(z + s1 tau + s2)`,
/// expanded as `sum_n q^{(n+1/2+s1)^2/2} e((n+1/2+s1) z) e((n+1/2)(s2-1/2) + s1 s2/2)`.
pub fn theta_translate(s1: &Rat, s2: &Rat, order: &Rat) -> JacobiSeries {
    let half = rat(1, 2);
    let c = &half + s1;
    let terms = shifted_range(&c, order).into_iter().map(|n| {
        let t = int(n) + &c;
        let phase = (int(n) + &half) * (s2 - &half) + s1 * s2 / int(2);
        (&t * &t / int(2), vec![t], CycRational::e(&phase))
    });
    JacobiSeries::from_terms(1, terms, Some(order.clone()))
}

/// `theta1(z, tau)` from its defining sum.
pub fn theta1_sum(order: &Rat) -> JacobiSeries {
    theta_translate(&Rat::zero(), &Rat::zero(), order)
}

/// `theta1` from the triple product
/// `-i q^{1/8} (e(z/2) - e(-z/2)) prod (1-q^n)(1-q^n e(z))(1-q^n e(-z))`.
pub fn theta1_product(order: &Rat) -> Result<JacobiSeries> {
    let lead = rat(1, 8);
    let inner = order - &lead;
    let one = CycRational::one();
    let mut p = JacobiSeries::one(1).truncate(&inner);
    let mut n = 1;
    while int(n) < inner {
        for key in [0, 1, -1] {
            let f = JacobiSeries::binomial_factor(1, &int(n), &[int(key)], &one, 1, &inner)?;
            p = p.checked_mul(&f)?;
        }
        n += 1;
    }
    let mi = -CycRational::i();
    let front = JacobiSeries::from_terms(
        1,
        [
            (lead.clone(), vec![rat(1, 2)], mi.clone()),
            (lead, vec![rat(-1, 2)], -mi),
        ],
        None,
    );
    Ok(front.checked_mul(&p)?.truncate(order))
}

/// `alpha(l) e(E(eta, l)/2)` for `l = a tau + b`: the factor relating
/// `Theta1[eta + l]` to `Theta1[eta]`.
pub fn translate_law_factor(s1: &Rat, s2: &Rat, a: i64, b: i64) -> CycRational {
    let alpha0 = rat(a * b, 2);
    let lam = if (a + b).rem_euclid(2) == 0 { int(0) } else { rat(1, 2) };
    let e_form = s1 * int(b) - int(a) * s2;
    CycRational::e(&(alpha0 + lam + e_form / int(2)))
}

/// Product form of `Theta1[s](z) / eta(tau)` for `-1 < s1 <= 0`.
///
/// Returns `(u, P)` with `Theta1[s]/eta = u P`, where `u` is the unit
/// `alpha0(s) (-i) e(s2/2)` and `P` is
/// `q^{s1^2/2 + 1/12 + s1/2} e((s1+1/2) z) prod_{n>=1} (1 - q^{n+s1} e(z+s2)) prod_{n>=0} (1 - q^{n-s1} e(-z-s2))`.
pub fn theta_translate_over_eta_product(
    s1: &Rat,
    s2: &Rat,
    order: &Rat,
) -> Result<(CycRational, JacobiSeries)> {
    if !(s1 > &int(-1) && s1 <= &Rat::zero()) {
        return Err(Error::Unsupported(format!(
            "product form needs -1 < s1 <= 0, got {s1}"
        )));
    }
    let unit = CycRational::e(&(s1 * s2 / int(2)))
        * (-CycRational::i())
        * CycRational::e(&(s2 / int(2)));
    let lead = s1 * s1 / int(2) + rat(1, 12) + s1 / int(2);
    let inner = order - &lead;
    let plus = CycRational::e(s2);
    let minus = CycRational::e(&-s2);
    let mut p = JacobiSeries::one(1).truncate(&inner);
    let mut n = 0;
    loop {
        let e_minus = int(n) - s1;
        let e_plus = int(n) + s1;
        let mut any = false;
        if n >= 1 && e_plus < inner {
            let f = JacobiSeries::binomial_factor(1, &e_plus, &[int(1)], &plus, 1, &inner)?;
            p = p.checked_mul(&f)?;
            any = true;
        }
        if e_minus < inner {
            let f = JacobiSeries::binomial_factor(1, &e_minus, &[int(-1)], &minus, 1, &inner)?;
            p = p.checked_mul(&f)?;
            any = true;
        }
        if !any && n >= 1 {
            break;
        }
        n += 1;
    }
    let front = JacobiSeries::monomial(1, &lead, &[s1 + rat(1, 2)], CycRational::one());
    Ok((unit, front.checked_mul(&p)?.truncate(order)))
}
