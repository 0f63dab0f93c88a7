use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::rational::{int, rat, to_i64, Rat};
use crate::exactmath::{CycRational, JacobiSeries};
use crate::lattice::WittLattice;
use crate::modforms::{eta_power, theta_translate, theta_translate_over_eta_product, VectorValuedForm};

use super::{half_power, keys_for, Chamber0};

/// One theta factor of `Psi0`, with translate `s = -(lam21 tau + lam22)`.
struct ThetaFactor {
    /// `Some(x0)` for a positive root (argument `-(x0, w0)`), `None` for a torsion point (argument 0).
    x0: Option<Vec<Rat>>,
    s1: Rat,
    s2: Rat,
    /// Exponent of the factor; for a torsion pair this is `c` applied to one member.
    power: i64,
    /// For a torsion pair `(lam, -lam)`, the translate of `-lam`.
    partner: Option<(Rat, Rat)>,
}

struct Plan {
    c00: i64,
    factors: Vec<ThetaFactor>,
}

fn as_int(c: &Rat, what: &str) -> Result<i64> {
    if !c.is_integer() {
        return Err(Error::Validation(format!("{what} = {c} is not an integer")));
    }
    Ok(to_i64(&c.to_integer()))
}

fn translate_of(lattice: &WittLattice, id: usize) -> (Rat, Rat) {
    let (l21, l22) = lattice.lam2(id);
    (-l21, -l22)
}

fn plan(form: &VectorValuedForm, lattice: &WittLattice, chamber: &Chamber0) -> Result<Plan> {
    let zero = lattice.zero_id();
    let c00 = as_int(&form.coefficient(zero, &Rat::zero())?, "c_0(0)")?;
    let mut factors = Vec::new();
    for root in chamber.positive_roots() {
        for (id, c) in &root.mults {
            let (s1, s2) = translate_of(lattice, *id);
            factors.push(ThetaFactor {
                x0: Some(root.x0.clone()),
                s1,
                s2,
                power: as_int(c, "root multiplicity")?,
                partner: None,
            });
        }
    }
    let rank = lattice.l0().rank();
    for id in lattice.lam1_zero_ids() {
        let coset = lattice.coset(id);
        if coset.lam2 == [0, 0] || coset.lam0 != vec![Rat::zero(); rank] {
            continue;
        }
        let c = as_int(&form.coefficient(id, &Rat::zero())?, "c_lam(0)")?;
        if c == 0 {
            continue;
        }
        let neg = lattice.negate(id);
        let (s1, s2) = translate_of(lattice, id);
        if neg == id {
            if c % 2 != 0 {
                return Err(Error::Unsupported(format!(
                    "odd constant term {c} on the 2-torsion coset {id}"
                )));
            }
            factors.push(ThetaFactor {
                x0: None,
                s1,
                s2,
                power: c / 2,
                partner: None,
            });
        } else if neg > id {
            factors.push(ThetaFactor {
                x0: None,
                s1,
                s2,
                power: c,
                partner: Some(translate_of(lattice, neg)),
            });
        }
    }
    Ok(Plan { c00, factors })
}

/// Lowest q1-exponent of `Theta1[s](-(x0, w0)) / eta` for `-1 < s1 <= 0`.
fn factor_valuation(s1: &Rat) -> Rat {
    let t = s1 + rat(1, 2);
    &t * &t / int(2) - rat(1, 24)
}

/// Lowest q1-exponent of `Psi0`.
pub(crate) fn psi0_valuation(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    chamber: &Chamber0,
) -> Result<Rat> {
    Ok(plan_valuation(&plan(form, lattice, chamber)?))
}

fn plan_valuation(p: &Plan) -> Rat {
    let mut v = rat(p.c00, 24);
    for f in &p.factors {
        v += factor_valuation(&f.s1) * int(f.power);
    }
    v
}

/// Put a rank-1 series in `z` at `z = -(x0, w0)` or at `z = 0`.
fn place(lattice: &WittLattice, s: &JacobiSeries, x0: Option<&[Rat]>) -> JacobiSeries {
    match x0 {
        Some(x0) => {
            let col = keys_for(lattice, x0, &int(-1));
            let mat: Vec<Vec<Rat>> = col.into_iter().map(|v| vec![v]).collect();
            s.map_keys(lattice.l0().rank(), &mat)
        }
        None => s.sum_over_keys().lift_rank(lattice.l0().rank()),
    }
}

fn pow_series(s: &JacobiSeries, k: i64, order: &Rat) -> Result<JacobiSeries> {
    Ok(s.pow(k, order)?.truncate(order))
}

/// `Psi0` from theta sums: `eta^{c0(0) - sum c} prod Theta1[s]^c`, normalized so
/// that the exponential route has `kappa = 1`. Also returns the unit `u` with
/// `Psi0 = u P` for the pure product `P` of `psi0_product`.
pub fn psi0(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    chamber: &Chamber0,
    order: &Rat,
) -> Result<(JacobiSeries, CycRational)> {
    let series = psi0_sum(form, lattice, chamber, order)?;
    let (phase, _) = psi0_product(form, lattice, chamber, order)?;
    Ok((series, phase))
}

pub(crate) fn psi0_sum(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    chamber: &Chamber0,
    order: &Rat,
) -> Result<JacobiSeries> {
    let p = plan(form, lattice, chamber)?;
    let rank = lattice.l0().rank();
    // At least one q1-step past the leading term, so the unit is always determined.
    let rel = (order - plan_valuation(&p)).max(int(1));
    let mut eta_exp = p.c00;
    let mut unit = CycRational::one();
    let mut acc = JacobiSeries::one(rank);
    for f in &p.factors {
        let theta_val = factor_valuation(&f.s1) + rat(1, 24);
        let o = &theta_val + &rel;
        let th = theta_translate(&f.s1, &f.s2, &o);
        let placed = place(lattice, &th, f.x0.as_deref());
        if let Some((t1, t2)) = &f.partner {
            let other = place(lattice, &theta_translate(t1, t2, &o), None);
            let rho = other.ratio_to(&placed).ok_or_else(|| {
                Error::Consistency("torsion theta values are not proportional".into())
            })?;
            unit = &unit * &half_power(&rho, &int(f.power))?;
        }
        let f_order = &theta_val * int(f.power) + &rel;
        acc = acc.checked_mul(&pow_series(&placed, f.power, &f_order)?)?;
        eta_exp -= f.power;
    }
    let eta = eta_power(eta_exp, &(rat(eta_exp, 24) + &rel))?.lift_rank(rank);
    Ok(acc.checked_mul(&eta)?.scalar_mul(&unit).truncate(order))
}

/// `Psi0 = u P` from the product forms of `Theta1[s]/eta` and `eta`.
/// Returns `(u, P)`.
pub fn psi0_product(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    chamber: &Chamber0,
    order: &Rat,
) -> Result<(CycRational, JacobiSeries)> {
    let p = plan(form, lattice, chamber)?;
    let rank = lattice.l0().rank();
    // At least one q1-step past the leading term, so the unit is always determined.
    let rel = (order - plan_valuation(&p)).max(int(1));
    let mut unit = CycRational::one();
    let mut acc = JacobiSeries::one(rank);
    for f in &p.factors {
        let v = factor_valuation(&f.s1);
        let o = &v + &rel;
        let (u, prod) = theta_translate_over_eta_product(&f.s1, &f.s2, &o)?;
        let placed = place(lattice, &prod, f.x0.as_deref());
        if let Some((t1, t2)) = &f.partner {
            let (u2, prod2) = theta_translate_over_eta_product(t1, t2, &o)?;
            let other = place(lattice, &prod2, None).scalar_mul(&u2);
            let rho = other.ratio_to(&placed.scalar_mul(&u)).ok_or_else(|| {
                Error::Consistency("torsion theta values are not proportional".into())
            })?;
            unit = &unit * &half_power(&rho, &int(f.power))?;
        }
        unit = &unit * &u.pow(f.power)?;
        let f_order = &v * int(f.power) + &rel;
        acc = acc.checked_mul(&pow_series(&placed, f.power, &f_order)?)?;
    }
    // eta^{c00} = q^{c00/24} prod (1 - q^n)^{c00}
    let mut eta = JacobiSeries::one(rank).truncate(&rel);
    if p.c00 != 0 {
        let mut n = 1;
        while int(n) < rel {
            let zero_key = vec![Rat::zero(); rank];
            eta = eta.checked_mul(&JacobiSeries::binomial_factor(
                rank,
                &int(n),
                &zero_key,
                &CycRational::one(),
                p.c00,
                &rel,
            )?)?;
            n += 1;
        }
    }
    let eta = eta.shift(&rat(p.c00, 24), &vec![Rat::zero(); rank]);
    Ok((unit, acc.checked_mul(&eta)?.truncate(order)))
}
