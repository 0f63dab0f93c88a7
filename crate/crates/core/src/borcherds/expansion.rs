use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::rational::{frac, int, Rat};
use crate::exactmath::{series_exp_graded, CycRational, GradedFJSeries, JacobiSeries};
use crate::lattice::WittLattice;
use crate::modforms::VectorValuedForm;

use super::psi0::{psi0_product, psi0_sum, psi0_valuation};
use super::{check_form, choose_chamber, compute_i0_checked, keys_for, theta_an, Chamber0};

/// A computed expansion `q2^{I0} sum_k Psi_k q2^k`.
#[derive(Clone, Debug)]
pub struct FJResult {
    pub i0: Rat,
    /// Graded series with `offset = I0`; grade `k` is `Psi_k`.
    pub psi: GradedFJSeries,
    pub chamber: Chamber0,
    /// The unit `u` with `Psi0 = u P` for the pure theta/eta product `P`.
    pub phase: CycRational,
}

struct Windows {
    /// Per-grade working truncation `T_k = R' + (K - k) m_max`.
    t: Vec<Rat>,
    order: Rat,
    psi0_order: Rat,
}

fn windows(form: &VectorValuedForm, k: usize, order: &Rat, psi0_val: &Rat) -> Windows {
    let mm = form.m_max().unwrap_or_else(Rat::zero).max(Rat::zero());
    let r_prime = order - psi0_val.min(&Rat::zero());
    let t = (0..=k)
        .map(|g| &r_prime + &mm * int((k - g) as i64))
        .collect();
    Windows {
        t,
        order: order.clone(),
        psi0_order: order + &mm * int(k as i64),
    }
}

fn finish(psi0: &JacobiSeries, grades: &[JacobiSeries], w: &Windows) -> Result<Vec<JacobiSeries>> {
    let mut out = Vec::with_capacity(grades.len());
    for (k, g) in grades.iter().enumerate() {
        let p = psi0.checked_mul(g)?;
        if p.trunc().is_some_and(|t| t < w.order) {
            return Err(Error::Consistency(format!(
                "grade {k} known only below q1^{}, window needs {}",
                p.trunc().expect("checked"),
                w.order
            )));
        }
        out.push(p.truncate(&w.order));
    }
    Ok(out)
}

/// `q2^{I0} Psi0 exp(-sum_{a n <= K} q2^{a n} Theta_{a,n} / n)` through grade `k`
/// and `q1^order`.
pub fn fj_expansion(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    k: usize,
    order: &Rat,
) -> Result<FJResult> {
    check_form(form, lattice)?;
    let i0 = compute_i0_checked(form, lattice)?;
    let chamber = choose_chamber(form, lattice)?;
    let rank = lattice.l0().rank();
    let val = psi0_valuation(form, lattice, &chamber)?;
    let w = windows(form, k, order, &val);
    let psi0 = psi0_sum(form, lattice, &chamber, &w.psi0_order)?;
    let mut s = vec![JacobiSeries::zero(rank); k + 1];
    for (g, slot) in s.iter_mut().enumerate().skip(1) {
        let mut acc = JacobiSeries::zero(rank).truncate(&w.t[g]);
        for n in 1..=g {
            if g % n != 0 {
                continue;
            }
            let a = g / n;
            let th = theta_an(form, lattice, a as u64, n as u64, &w.t[g])?;
            acc = acc.checked_sub(&th.scale_rat(&(Rat::one() / int(n as i64))))?;
        }
        *slot = acc;
    }
    let e = series_exp_graded(&GradedFJSeries::new(Rat::zero(), s))?;
    let grades = finish(&psi0, &e.grades, &w)?;
    let (phase, _) = psi0_product(form, lattice, &chamber, &int(1).max(order.clone()))?;
    Ok(FJResult {
        i0: i0.clone(),
        psi: GradedFJSeries::new(i0, grades),
        chamber,
        phase,
    })
}

/// One factor `(1 - y q2^a)^c` of the first product with `y = e q1^exp X^key`.
struct Factor {
    a: usize,
    exp: Rat,
    key: Vec<Rat>,
    phase: CycRational,
    c: Rat,
}

/// Multiply `acc` (grades truncated at `w.t`) by one factor, in place.
fn apply_factor(acc: &mut [JacobiSeries], f: &Factor, w: &Windows) -> Result<()> {
    let top = acc.len() - 1;
    let rank = acc[0].rank();
    // Binomial terms C(c, j) (-y)^j q2^{a j}.
    let mut terms = Vec::new();
    let mut binom = Rat::one();
    let mut y = CycRational::one();
    let mut j = 1usize;
    while f.a * j <= top {
        binom = binom * (&f.c - int(j as i64 - 1)) / int(j as i64);
        y = &y * &f.phase;
        if binom.is_zero() {
            break;
        }
        let sign = if j.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
        let key: Vec<Rat> = f.key.iter().map(|v| v * int(j as i64)).collect();
        terms.push((
            f.a * j,
            JacobiSeries::monomial(rank, &(&f.exp * int(j as i64)), &key, y.scale(&(&binom * sign))),
        ));
        j += 1;
    }
    for g in (0..=top).rev() {
        let mut sum = acc[g].clone();
        for (shift, mono) in &terms {
            if *shift > g {
                break;
            }
            sum = sum.checked_add(&acc[g - shift].checked_mul(mono)?.truncate(&w.t[g]))?;
        }
        acc[g] = sum.truncate(&w.t[g]);
    }
    Ok(())
}

/// The first product restricted to the `(K, order)` window, as grades `0..=K`.
fn first_product(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    w: &Windows,
) -> Result<Vec<JacobiSeries>> {
    let top = w.t.len() - 1;
    let l0 = lattice.l0();
    let rank = l0.rank();
    let big_n = lattice.n() as usize;
    let mut acc: Vec<JacobiSeries> = (0..=top)
        .map(|g| {
            let base = if g == 0 {
                JacobiSeries::one(rank)
            } else {
                JacobiSeries::zero(rank)
            };
            base.truncate(&w.t[g])
        })
        .collect();
    let mut factors = Vec::new();
    for a in 1..=top {
        // Largest q1-exponent a factor with this a may need: max_j T_{aj} / j.
        let reach = (1..=top / a)
            .map(|j| &w.t[a * j] / int(j as i64))
            .max()
            .expect("a <= top");
        let ar = int(a as i64);
        let m_bound = &ar * &reach;
        for id in 0..lattice.num_cosets() {
            let coset = lattice.coset(id);
            if coset.lam1[1] != 0 || coset.lam1[0] as usize != a % big_n {
                continue;
            }
            let (l21, l22) = lattice.lam2(id);
            let phase = CycRational::e(&-l22);
            for (m, c) in form.support(id, &m_bound)? {
                let qmax = &m_bound - &m;
                if qmax.is_negative() {
                    continue;
                }
                if !c.is_integer() {
                    return Err(Error::Unsupported(format!(
                        "non-integral exponent c = {c} in the first product"
                    )));
                }
                for x0 in l0.enumerate_by_norm(&coset.lam0, &qmax) {
                    let s = &m + l0.q(&x0);
                    let e = &s / &ar;
                    if !frac(&(&e + &l21)).is_zero() {
                        continue;
                    }
                    let needed = (1..=top / a).any(|j| &e * int(j as i64) < w.t[a * j]);
                    if !needed {
                        continue;
                    }
                    factors.push(Factor {
                        a,
                        exp: e,
                        key: keys_for(lattice, &x0, &-Rat::one()),
                        phase: phase.clone(),
                        c: c.clone(),
                    });
                }
            }
        }
    }
    for f in &factors {
        apply_factor(&mut acc, f, w)?;
    }
    Ok(acc)
}

/// The product formula expanded directly: first product times `Psi0` times `q2^{I0}`.
pub fn product_expansion(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    chamber: &Chamber0,
    k: usize,
    order: &Rat,
) -> Result<FJResult> {
    check_form(form, lattice)?;
    let i0 = compute_i0_checked(form, lattice)?;
    let val = psi0_valuation(form, lattice, chamber)?;
    let w = windows(form, k, order, &val);
    let (phase, pure) = psi0_product(form, lattice, chamber, &w.psi0_order)?;
    let psi0 = pure.scalar_mul(&phase);
    let first = first_product(form, lattice, &w)?;
    let grades = finish(&psi0, &first, &w)?;
    Ok(FJResult {
        i0: i0.clone(),
        psi: GradedFJSeries::new(i0, grades),
        chamber: chamber.clone(),
        phase,
    })
}

/// The first product alone through grade `k` and `q1^order` (grade 0 is 1).
pub fn first_product_expansion(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    k: usize,
    order: &Rat,
) -> Result<GradedFJSeries> {
    check_form(form, lattice)?;
    let w = windows(form, k, order, &Rat::zero());
    let grades = first_product(form, lattice, &w)?;
    Ok(GradedFJSeries::new(
        Rat::zero(),
        grades.into_iter().map(|g| g.truncate(order)).collect(),
    ))
}
