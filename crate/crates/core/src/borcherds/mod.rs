//! Fourier-Jacobi and product expansions of Borcherds forms at a
//! one-dimensional cusp.

mod expansion;
mod local;
mod psi0;
mod theta_an;

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::rational::{abs, int, is_integer, Rat};
use crate::exactmath::CycRational;
use crate::lattice::WittLattice;
use crate::modforms::{sigma1, theta_coset, validate_form, Classical, QSeries, VectorValuedForm};

pub use expansion::{first_product_expansion, fj_expansion, product_expansion, FJResult};
pub use local::{
    local_borcherds_product, local_product_identity, theta1_general, theta_translate_law_check,
    translation_law_check, LawCheck,
};
pub use psi0::{psi0, psi0_product};
pub use theta_an::theta_an;

/// A root `x0` of `F` with the coset multiplicities attached to it.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub x0: Vec<Rat>,
    pub q: Rat,
    /// `(coset id, c_lam(-Q(x0)))` over cosets with `lam1 = 0` containing `x0`.
    pub mults: Vec<(usize, Rat)>,
}

/// The roots of `F` in `V0` together with a chamber witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Chamber0 {
    pub roots: Vec<Root>,
    pub witness: Vec<Rat>,
    /// Indices into `roots` with positive pairing against the witness.
    pub positive: Vec<usize>,
}

impl Chamber0 {
    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.positive.iter().map(|&i| &self.roots[i])
    }

    /// Sum of `c` over positive roots and their cosets.
    pub fn positive_multiplicity(&self) -> Rat {
        self.positive_roots()
            .flat_map(|r| r.mults.iter().map(|(_, c)| c.clone()))
            .sum()
    }
}

pub(crate) fn check_form(form: &VectorValuedForm, lattice: &WittLattice) -> Result<()> {
    validate_form(form, lattice).into_result()
}

/// All roots of `F`: `x0` in `L0^dual` with `Q(x0) > 0` and `c_lam(-Q(x0)) != 0`
/// for some `lam` with `lam1 = 0` and `lam0 = x0 + L0`.
pub fn find_roots(form: &VectorValuedForm, lattice: &WittLattice) -> Result<Vec<Root>> {
    let l0 = lattice.l0();
    let mut found: std::collections::BTreeMap<Vec<Rat>, Vec<(usize, Rat)>> = Default::default();
    for (id, m, c) in form.principal_part() {
        let coset = lattice.coset(*id);
        if coset.lam1 != [0, 0] {
            continue;
        }
        let norm = -m;
        for x0 in l0.enumerate_by_norm(&coset.lam0, &norm) {
            if l0.q(&x0) == norm {
                found.entry(x0).or_default().push((*id, c.clone()));
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|(x0, mults)| {
            let q = l0.q(&x0);
            Root { x0, q, mults }
        })
        .collect())
}

/// Pairing `(x0, v)` for each root; `None` if some pairing vanishes.
fn partition(lattice: &WittLattice, roots: &[Root], v: &[Rat]) -> Option<Vec<usize>> {
    let mut pos = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        let p = lattice.l0().gram_pair(&r.x0, v).expect("rank checked");
        if p.is_zero() {
            return None;
        }
        if p.is_positive() {
            pos.push(i);
        }
    }
    Some(pos)
}

/// Chamber for a given witness; fails if the witness lies on a wall.
pub fn chamber_with_witness(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    witness: Vec<Rat>,
) -> Result<Chamber0> {
    if witness.len() != lattice.l0().rank() {
        return Err(Error::DimensionMismatch {
            expected: lattice.l0().rank(),
            got: witness.len(),
        });
    }
    let roots = find_roots(form, lattice)?;
    let positive = partition(lattice, &roots, &witness)
        .ok_or_else(|| Error::Consistency("witness lies on a root wall".into()))?;
    Ok(Chamber0 {
        roots,
        witness,
        positive,
    })
}

/// Deterministic chamber: witness `(1, t, t^2, ...)`, halving `t` until no
/// root pairing vanishes.
pub fn choose_chamber(form: &VectorValuedForm, lattice: &WittLattice) -> Result<Chamber0> {
    check_form(form, lattice)?;
    let roots = find_roots(form, lattice)?;
    let rank = lattice.l0().rank();
    let maxc = roots
        .iter()
        .flat_map(|r| r.x0.iter().map(abs))
        .max()
        .unwrap_or_else(Rat::zero);
    let d = lattice.l0().dual_exponent();
    let mut t = Rat::from_integer(1.into())
        / (int(1) + maxc * int(rank as i64) * int(2 * d));
    loop {
        let mut v = Vec::with_capacity(rank);
        let mut p = int(1);
        for _ in 0..rank {
            v.push(p.clone());
            p *= &t;
        }
        if let Some(positive) = partition(lattice, &roots, &v) {
            return Ok(Chamber0 {
                roots,
                witness: v,
                positive,
            });
        }
        t /= int(2);
    }
}

/// Which formula computes `I0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum I0Route {
    /// `-sum c_lam(-m) sigma1(m - Q(x0))`.
    SigmaSum,
    /// Constant term of `E2 * sum_lam0 F^o_lam0 theta_lam0`, divided by 24.
    E2ConstantTerm,
}

/// `I0` by the chosen route.
pub fn compute_i0(form: &VectorValuedForm, lattice: &WittLattice, route: I0Route) -> Result<Rat> {
    check_form(form, lattice)?;
    let l0 = lattice.l0();
    let ids = lattice.lam1_zero_ids();
    match route {
        I0Route::SigmaSum => {
            let mut total = Rat::zero();
            for &id in &ids {
                let lam0 = &lattice.coset(id).lam0;
                let mut ms: BTreeSet<Rat> = form
                    .principal_part()
                    .iter()
                    .filter(|(i, _, _)| *i == id)
                    .map(|(_, m, _)| -m)
                    .collect();
                ms.insert(Rat::zero());
                for m in ms {
                    let c = form.coefficient(id, &-&m)?;
                    if c.is_zero() {
                        continue;
                    }
                    for x0 in l0.enumerate_by_norm(lam0, &m) {
                        total -= &c * sigma1(&(&m - l0.q(&x0)));
                    }
                }
            }
            Ok(total)
        }
        I0Route::E2ConstantTerm => {
            let mm = form.m_max().unwrap_or_else(Rat::zero).max(Rat::zero());
            let one = int(1);
            let comps = form.components(&one)?;
            let mut g = QSeries::zero(0);
            for dc in lattice.l0_cosets() {
                let mut fo = QSeries::zero(0).truncate(&one);
                for &id in &ids {
                    if lattice.coset(id).lam0 == dc.rep {
                        fo = fo.checked_add(&comps[id])?;
                    }
                }
                if fo.is_zero() {
                    continue;
                }
                let th = theta_coset(l0, &dc.rep, &(&one + &mm));
                g = g.checked_add(&fo.checked_mul(&th)?)?;
            }
            let e2 = crate::modforms::classical_series(Classical::E2, &(&one + &mm))?;
            let prod = e2.checked_mul(&g)?;
            if prod.trunc().is_some_and(|t| !t.is_positive()) {
                return Err(Error::Consistency("constant term outside the window".into()));
            }
            Ok(prod.q_coefficient_rat(&Rat::zero()) / int(24))
        }
    }
}

/// `I0` by both routes; their disagreement is an error.
pub fn compute_i0_checked(form: &VectorValuedForm, lattice: &WittLattice) -> Result<Rat> {
    let a = compute_i0(form, lattice, I0Route::SigmaSum)?;
    let b = compute_i0(form, lattice, I0Route::E2ConstantTerm)?;
    if a != b {
        return Err(Error::Consistency(format!(
            "I0 routes disagree: sigma sum {a}, E2 constant term {b}"
        )));
    }
    if !is_integer(&(&a * int(24))) {
        return Err(Error::Consistency(format!("24 I0 = {} is not integral", &a * int(24))));
    }
    Ok(a)
}

/// Both sides of `4 I0 Q(v) = sum c_lam(-m) sum_{Q(x0)=m} (x0, v)^2` as matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSystem {
    pub lhs: Vec<Vec<Rat>>,
    pub rhs: Vec<Vec<Rat>>,
    pub equal: bool,
}

impl VectorSystem {
    pub fn difference(&self) -> Vec<Vec<Rat>> {
        self.lhs
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect()
    }
}

/// `lhs = 2 I0 G`, `rhs = sum c (G x0)(G x0)^T` over roots.
pub fn vector_system_check(form: &VectorValuedForm, lattice: &WittLattice) -> Result<VectorSystem> {
    let i0 = compute_i0(form, lattice, I0Route::SigmaSum)?;
    let l0 = lattice.l0();
    let r = l0.rank();
    let lhs: Vec<Vec<Rat>> = l0
        .gram()
        .iter()
        .map(|row| row.iter().map(|&g| int(2) * &i0 * int(g)).collect())
        .collect();
    let mut rhs = vec![vec![Rat::zero(); r]; r];
    for root in find_roots(form, lattice)? {
        let c: Rat = root.mults.iter().map(|(_, c)| c.clone()).sum();
        let gx = l0.gram_mul(&root.x0);
        for i in 0..r {
            for j in 0..r {
                rhs[i][j] += &c * &gx[i] * &gx[j];
            }
        }
    }
    let equal = lhs == rhs;
    Ok(VectorSystem { lhs, rhs, equal })
}

pub(crate) fn keys_for(lattice: &WittLattice, x0: &[Rat], factor: &Rat) -> Vec<Rat> {
    lattice
        .l0()
        .gram_mul(x0)
        .into_iter()
        .map(|g| g * factor)
        .collect()
}

/// `e(r c / 2)` for `rho = e(r)`, `0 <= r < 1`.
pub(crate) fn half_power(rho: &CycRational, c: &Rat) -> Result<CycRational> {
    let r = rho.root_of_unity_exponent().ok_or_else(|| {
        Error::Consistency(format!("pairing ratio {rho} is not a root of unity"))
    })?;
    Ok(CycRational::e(&(r * c / int(2))))
}
