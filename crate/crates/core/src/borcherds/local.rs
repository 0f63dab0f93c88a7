use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::rational::{ceil_i64, floor_i64, int, rat, to_f64, Rat};
use crate::exactmath::{CycRational, Difference, JacobiSeries};
use crate::lattice::WittLattice;
use crate::modforms::{eta_power, theta_translate, translate_law_factor, VectorValuedForm};

use super::{keys_for, theta_an};

/// Outcome of an identity check between two series.
#[derive(Clone, Debug, PartialEq)]
pub struct LawCheck {
    pub name: String,
    pub lhs: JacobiSeries,
    pub rhs: JacobiSeries,
    pub first_difference: Option<Difference>,
}

impl LawCheck {
    pub fn new(name: impl Into<String>, lhs: JacobiSeries, rhs: JacobiSeries) -> Self {
        let first_difference = lhs.first_difference(&rhs);
        LawCheck {
            name: name.into(),
            lhs,
            rhs,
            first_difference,
        }
    }

    pub fn holds(&self) -> bool {
        self.first_difference.is_none()
    }
}

/// `theta1(u)` for `u = (k, w0) + s1 tau + s2`, i.e. the argument whose
/// character is `X^k q^{s1} e(s2)`:
/// `sum_n q^{(n+1/2)^2/2 + (n+1/2) s1} X^{(n+1/2) k} e((n+1/2)(s2 - 1/2))`.
pub fn theta1_general(key: &[Rat], s1: &Rat, s2: &Rat, order: &Rat) -> JacobiSeries {
    let half = rat(1, 2);
    // exponent (t^2 - s1^2)/2 with t = n + 1/2 + s1
    let r = (2.0 * to_f64(order) + to_f64(s1).powi(2)).max(0.0).sqrt();
    let lo = floor_i64(&Rat::from_float(-r - to_f64(s1) - 0.5).unwrap_or_else(Rat::zero)) - 1;
    let hi = ceil_i64(&Rat::from_float(r - to_f64(s1) - 0.5).unwrap_or_else(Rat::zero)) + 1;
    let terms = (lo..=hi).filter_map(|n| {
        let t = int(n) + &half;
        let e = &t * &t / int(2) + &t * s1;
        (&e < order).then(|| {
            (
                e,
                key.iter().map(|k| k * &t).collect(),
                CycRational::e(&(&t * (s2 - &half))),
            )
        })
    });
    JacobiSeries::from_terms(key.len(), terms, Some(order.clone()))
}

/// `Psi_x = (1 - e((x,w))) prod_{a>0} (1 - q^a e((x,w))) (1 - q^a e(-(x,w)))` with
/// `e((x,w)) = X^{G x0} q^{lam21} e(lam22)`, `0 <= lam21 < 1`.
pub fn local_borcherds_product(
    lattice: &WittLattice,
    x0: &[Rat],
    lam21: &Rat,
    lam22: &Rat,
    order: &Rat,
) -> Result<JacobiSeries> {
    if lam21 < &Rat::zero() || lam21 >= &int(1) {
        return Err(Error::Unsupported(format!("lam21 = {lam21} outside [0, 1)")));
    }
    let rank = lattice.l0().rank();
    let key = keys_for(lattice, x0, &int(1));
    let neg_key: Vec<Rat> = key.iter().map(|k| -k).collect();
    let plus = CycRational::e(lam22);
    let minus = CycRational::e(&-lam22);
    let mut p = JacobiSeries::binomial_factor(rank, lam21, &key, &plus, 1, order)?;
    let mut a = 1;
    while &(int(a) - lam21) < order {
        let ep = int(a) + lam21;
        if &ep < order {
            p = p.checked_mul(&JacobiSeries::binomial_factor(rank, &ep, &key, &plus, 1, order)?)?;
        }
        let em = int(a) - lam21;
        p = p.checked_mul(&JacobiSeries::binomial_factor(rank, &em, &neg_key, &minus, 1, order)?)?;
        a += 1;
    }
    Ok(p.truncate(order))
}

/// `theta1(-(x,w)) / eta = -i q^{1/12} e(-(x,w)/2) Psi_x` through `q1^order`.
pub fn local_product_identity(
    lattice: &WittLattice,
    x0: &[Rat],
    lam21: &Rat,
    lam22: &Rat,
    order: &Rat,
) -> Result<LawCheck> {
    let rank = lattice.l0().rank();
    let key = keys_for(lattice, x0, &int(1));
    let neg_key: Vec<Rat> = key.iter().map(|k| -k).collect();
    // theta1(-(x,w)) has valuation >= -lam21^2/2 + ...; work with margin 2.
    let work = order + int(2);
    let th = theta1_general(&neg_key, &-lam21, &-lam22, &work);
    let eta_inv = eta_power(-1, &work)?.lift_rank(rank);
    let lhs = th.checked_mul(&eta_inv)?.truncate(order);
    let psi = local_borcherds_product(lattice, x0, lam21, lam22, &work)?;
    let half_key: Vec<Rat> = key.iter().map(|k| -k / int(2)).collect();
    let front = JacobiSeries::monomial(
        rank,
        &(rat(1, 12) - lam21 / int(2)),
        &half_key,
        -CycRational::i() * CycRational::e(&(-lam22 / int(2))),
    );
    let rhs = front.checked_mul(&psi)?.truncate(order);
    Ok(LawCheck::new("local product identity", lhs, rhs))
}

/// `Theta1[eta + l] = alpha(l) e(E(eta, l)/2) Theta1[eta]` for `l = a tau + b`.
pub fn theta_translate_law_check(s1: &Rat, s2: &Rat, a: i64, b: i64, order: &Rat) -> LawCheck {
    let lhs = theta_translate(&(s1 + int(a)), &(s2 + int(b)), order);
    let rhs = theta_translate(s1, s2, order).scalar_mul(&translate_law_factor(s1, s2, a, b));
    LawCheck::new(format!("theta translate law l = {a} tau + {b}"), lhs, rhs)
}

/// `Theta_{a,n}(w0 + b1 tau1 + b2) = e(-a n Q(b1) tau1 - a n (w0, b1)) Theta_{a,n}(w0)`,
/// compared below `q1^window`.
pub fn translation_law_check(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    a: u64,
    n: u64,
    b1: &[i64],
    b2: &[i64],
    window: &Rat,
) -> Result<LawCheck> {
    let l0 = lattice.l0();
    let b1r: Vec<Rat> = b1.iter().map(|&v| int(v)).collect();
    let qb = l0.q(&b1r);
    let (ar, nr) = (int(a as i64), int(n as i64));
    let an = &ar * &nr;
    // A term of the true series lands below the window only if
    // Q(x0 - a b1) < a (window + a n Q(b1)) / n - m, so Q(x0) is bounded via
    // sqrt Q(x0) <= sqrt Q(x0 - a b1) + a sqrt Q(b1).
    let mm = form.m_max().unwrap_or_else(Rat::zero).max(Rat::zero());
    let big_m = &ar * (window + &an * &qb) / &nr;
    let b_max = to_f64(&(&big_m + &mm)).max(0.0);
    let reach = (b_max.sqrt() + to_f64(&ar) * to_f64(&qb).sqrt()).powi(2);
    let t = int(ceil_i64(&Rat::from_float(to_f64(&nr) * (to_f64(&big_m) + reach) / to_f64(&ar)).unwrap_or_else(Rat::zero)) + 1);
    let theta = theta_an(form, lattice, a, n, &t)?;
    let moved = theta.as_polynomial().substitute_w0_translation(b1, b2)?;
    let key = keys_for(lattice, &b1r, &-&an);
    let scaled = theta.shift(&(-&an * &qb), &key);
    Ok(LawCheck::new(
        format!("Theta_({a},{n}) translation by b1 = {b1:?}, b2 = {b2:?}"),
        moved.truncate(window),
        scaled.truncate(window),
    ))
}
