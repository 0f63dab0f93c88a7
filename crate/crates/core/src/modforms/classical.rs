//! Scalar q-series: eta powers, Eisenstein series, Delta, j, coset theta series.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::rational::{ceil_i64, frac, int, is_integer, rat, to_i64, Rat};
use crate::exactmath::JacobiSeries;
use crate::lattice::PosDefLattice;

/// A one-variable series: a `JacobiSeries` of rank 0.
pub type QSeries = JacobiSeries;

/// `prod_{n>=1} (1 - q^n)` through `order`, by the pentagonal number theorem.
pub fn euler_product(order: &Rat) -> QSeries {
    let bound = ceil_i64(order);
    let mut terms = Vec::new();
    let mut j: i64 = 0;
    loop {
        let mut any = false;
        for s in if j == 0 { vec![0] } else { vec![j, -j] } {
            let e = s * (3 * s - 1) / 2;
            if e < bound {
                any = true;
                let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
                terms.push((int(e), int(sign)));
            }
        }
        if !any {
            break;
        }
        j += 1;
    }
    QSeries::from_q_terms(terms, Some(order.clone()))
}

/// `eta(tau)^k = q^{k/24} prod (1 - q^n)^k` through `order`.
pub fn eta_power(k: i64, order: &Rat) -> Result<QSeries> {
    let lead = rat(k, 24);
    let inner = order - &lead;
    let p = euler_product(&inner).pow(k, &inner)?;
    Ok(p.shift(&lead, &[]).truncate(order))
}

/// `sigma_k(n)` for `n >= 1`.
pub fn sigma_k(n: u64, k: u32) -> Rat {
    let mut s = num_bigint::BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += num_bigint::BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += num_bigint::BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    Rat::from_integer(s)
}

/// Divisor sum with `sigma1(0) = -1/24` and `sigma1(r) = 0` off the non-negative integers.
pub fn sigma1(r: &Rat) -> Rat {
    if !is_integer(r) || r < &Rat::zero() {
        return Rat::zero();
    }
    if r.is_zero() {
        return rat(-1, 24);
    }
    sigma_k(to_i64(&r.to_integer()) as u64, 1)
}

fn eisenstein(k: u32, c: i64, order: &Rat) -> QSeries {
    let bound = ceil_i64(order);
    let mut terms = vec![(Rat::zero(), Rat::one())];
    for n in 1..bound {
        terms.push((int(n), int(c) * sigma_k(n as u64, k - 1)));
    }
    QSeries::from_q_terms(terms, Some(order.clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classical {
    E2,
    E4,
    E6,
    Delta,
    J744,
}

impl std::str::FromStr for Classical {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "E2" => Classical::E2,
            "E4" => Classical::E4,
            "E6" => Classical::E6,
            "delta" => Classical::Delta,
            "j744" => Classical::J744,
            other => return Err(Error::Parse(format!("unknown classical series '{other}'"))),
        })
    }
}

/// Normalized classical expansions through `order`; `j744` is `E4^3 / Delta - 744`.
pub fn classical_series(name: Classical, order: &Rat) -> Result<QSeries> {
    Ok(match name {
        Classical::E2 => eisenstein(2, -24, order),
        Classical::E4 => eisenstein(4, 240, order),
        Classical::E6 => eisenstein(6, -504, order),
        Classical::Delta => eta_power(24, order)?,
        Classical::J744 => {
            let work = order.max(&Rat::zero()).clone() + int(2);
            let e4 = eisenstein(4, 240, &work);
            let delta = eta_power(24, &work)?;
            let j = (&e4.pow_u(3) * &delta.invert(order)?).truncate(order);
            j.checked_sub(&QSeries::constant(0, int(744).into()))?
                .truncate(order)
        }
    })
}

/// `sum_{x in lam0 + L0} q^{Q(x)}` through `order`.
pub fn theta_coset(l0: &PosDefLattice, lam0: &[Rat], order: &Rat) -> QSeries {
    // Norms on lam0 + L0 lie in Q(lam0) + Z, so the last one below `order` is
    // a whole step under it when the two are congruent.
    let gap = frac(&(order - l0.q(lam0)));
    let bound = order - if gap.is_zero() { Rat::one() } else { gap };
    let vs = l0.enumerate_by_norm(lam0, &bound);
    QSeries::from_q_terms(
        vs.iter().map(|x| (l0.q(x), Rat::one())),
        Some(order.clone()),
    )
}
