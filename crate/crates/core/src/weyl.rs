//! Comparison with the classical Borcherds product over
//! `L00 = Z e1 + L0 + Z e1'`, for unimodular Witt lattices (`N = 1`).
//!
//! Vectors of `V00` are stored as `b e1 + x0 + a' e1'` in the order
//! `(b, x0, a')`. The tube variable is `z = -tau2' e1 + w0 + tau1 e1'`, so
//! `e((r e1 + rho0 + r' e1', z)) = q1^r e((rho0, w0)) q2^{-r'}`.

use num_traits::{One, Signed, Zero};

use crate::borcherds::{check_form, compute_i0_checked, keys_for, Chamber0};
use crate::error::{Error, Result};
use crate::exactmath::rational::{abs, ceil_i64, floor_i64, int, rat, Rat};
use crate::exactmath::{CycRational, GradedFJSeries, JacobiSeries};
use crate::lattice::WittLattice;
use crate::modforms::VectorValuedForm;

/// A vector `b e1 + x0 + a' e1'` of `V00`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct V00Vector {
    pub e1: Rat,
    pub x0: Vec<Rat>,
    pub e1p: Rat,
}

impl V00Vector {
    /// `(u, v) = (u0, v0) + u_e1 v_e1' + u_e1' v_e1`.
    pub fn pair(&self, other: &Self, lattice: &WittLattice) -> Result<Rat> {
        Ok(lattice.l0().gram_pair(&self.x0, &other.x0)?
            + &self.e1 * &other.e1p
            + &self.e1p * &other.e1)
    }

    pub fn q(&self, lattice: &WittLattice) -> Result<Rat> {
        Ok(self.pair(self, lattice)? / int(2))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylData {
    pub m_max: Rat,
    pub b: Rat,
    /// `y = -y2 e1 + y0 + y1 e1'`, stored as `(y2, y0, y1)`.
    pub witness_y: (Rat, Vec<Rat>, Rat),
    pub rho00: V00Vector,
    pub i0: Rat,
    pub c00: Rat,
    pub chamber: Chamber0,
}

impl WeylData {
    fn y(&self) -> V00Vector {
        V00Vector {
            e1: -self.witness_y.0.clone(),
            x0: self.witness_y.1.clone(),
            e1p: self.witness_y.2.clone(),
        }
    }

    /// The same data with `y2` replaced.
    pub fn with_y2(&self, y2: Rat) -> Self {
        let mut w = self.clone();
        w.witness_y.0 = y2;
        w
    }
}

/// The root `x00 = b e1 - x0 - a e1'` with `Q(x00) = Q(x0) - a b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct V00Root {
    pub a: i64,
    pub b: i64,
    pub x0: Vec<Rat>,
}

impl V00Root {
    pub fn vector(&self) -> V00Vector {
        V00Vector {
            e1: int(self.b),
            x0: self.x0.iter().map(|v| -v).collect(),
            e1p: int(-self.a),
        }
    }
}

fn require_unimodular_support(form: &VectorValuedForm, lattice: &WittLattice) -> Result<()> {
    check_form(form, lattice)?;
    if lattice.n() != 1 {
        return Err(Error::Unsupported(format!(
            "Borcherds-side comparison needs N = 1, got N = {}",
            lattice.n()
        )));
    }
    let zero = lattice.zero_id();
    if form.principal_part().iter().any(|(id, _, _)| *id != zero) {
        return Err(Error::Unsupported(
            "Borcherds-side comparison needs a form supported on the zero coset".into(),
        ));
    }
    Ok(())
}

fn c_o(form: &VectorValuedForm, lattice: &WittLattice, m: &Rat) -> Result<Rat> {
    form.coefficient(lattice.zero_id(), m)
}

/// `(m_max, B)` with `B = 1/2 sum_{x0 != 0} c_o(-Q(x0))`.
pub fn weyl_constants(form: &VectorValuedForm, lattice: &WittLattice) -> Result<(Rat, Rat)> {
    require_unimodular_support(form, lattice)?;
    let m_max = form
        .m_max()
        .filter(|m| m.is_positive())
        .ok_or_else(|| Error::Unsupported("empty principal part: m_max undefined".into()))?;
    let l0 = lattice.l0();
    let zero = vec![Rat::zero(); l0.rank()];
    let mut total = Rat::zero();
    for x0 in l0.enumerate_by_norm(&zero, &m_max) {
        let q = l0.q(&x0);
        if q.is_zero() {
            continue;
        }
        total += c_o(form, lattice, &-q)?;
    }
    Ok((m_max, total / int(2)))
}

/// `rho00 = 1/2 sum_{x0 in R0+} c x0 + r' e1' + (c_o(0) + 2B)/24 e1`, with the
/// `e1'`-coefficient `r'` supplied by the caller.
fn rho_with(chamber: &Chamber0, c00: &Rat, b: &Rat, e1p: Rat, rank: usize) -> V00Vector {
    let mut x0 = vec![Rat::zero(); rank];
    for root in chamber.positive_roots() {
        let c: Rat = root.mults.iter().map(|(_, c)| c.clone()).sum();
        for (acc, v) in x0.iter_mut().zip(&root.x0) {
            *acc += &c * v / int(2);
        }
    }
    V00Vector {
        e1: (c00 + int(2) * b) / int(24),
        x0,
        e1p,
    }
}

/// Weyl vector with `e1'`-coefficient `-I0`, the value that reproduces the
/// factor `q2^{I0}` under `e((rho, z)) = q2^{-r'} ...`.
pub fn weyl_vector(form: &VectorValuedForm, lattice: &WittLattice, chamber: &Chamber0) -> Result<V00Vector> {
    Ok(select_chamber_witness(form, lattice, chamber)?.rho00)
}

/// Weyl vector with the `e1'`-coefficient written as `-I0/2`.
pub fn weyl_vector_half_index(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    chamber: &Chamber0,
) -> Result<V00Vector> {
    let w = select_chamber_witness(form, lattice, chamber)?;
    Ok(V00Vector {
        e1p: -&w.i0 / int(2),
        ..w.rho00
    })
}

/// Witness `y = (4 m_max + 3, -eps v, 1)` for the chamber witness `v`, with
/// `eps` small enough that `|(a0, y0)| < 1/2` on every root.
pub fn select_chamber_witness(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    chamber: &Chamber0,
) -> Result<WeylData> {
    let (m_max, b) = weyl_constants(form, lattice)?;
    let i0 = compute_i0_checked(form, lattice)?;
    let c00 = c_o(form, lattice, &Rat::zero())?;
    let l0 = lattice.l0();
    let v = &chamber.witness;
    let mut biggest = Rat::zero();
    for root in &chamber.roots {
        biggest = biggest.max(abs(&l0.gram_pair(&root.x0, v)?));
    }
    let mut eps = Rat::one() / (int(2) * biggest + int(1));
    let y2 = int(4) * &m_max + int(3);
    loop {
        let y0: Vec<Rat> = v.iter().map(|t| -(&eps * t)).collect();
        let mut ok = true;
        for (i, root) in chamber.roots.iter().enumerate() {
            let p = l0.gram_pair(&root.x0, &y0)?;
            let positive = chamber.positive.contains(&i);
            // R0- must pair into (0, 1/2); R0+ into (-1/2, 0).
            let inside = if positive {
                p.is_negative() && p > rat(-1, 2)
            } else {
                p.is_positive() && p < rat(1, 2)
            };
            ok &= inside;
        }
        let y = V00Vector {
            e1: -y2.clone(),
            x0: y0.clone(),
            e1p: int(1),
        };
        ok &= y.q(lattice)?.is_negative();
        if ok {
            let rho00 = rho_with(chamber, &c00, &b, -i0.clone(), l0.rank());
            return Ok(WeylData {
                m_max,
                b,
                witness_y: (y2, y0, int(1)),
                rho00,
                i0,
                c00,
                chamber: chamber.clone(),
            });
        }
        eps /= int(2);
    }
}

/// Roots `x00` with `a >= 0` inside the window of `borcherds_side_product`,
/// checked against the sign characterization: `a > 0`, or `a = 0, b > 0`, or
/// `a = b = 0` and `x0` a positive root. Returns the positive roots.
pub fn positive_roots_in_window(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    weyl: &WeylData,
    k: usize,
    order: &Rat,
) -> Result<Vec<(V00Root, Rat)>> {
    let w = windows(weyl, k, order);
    let l0 = lattice.l0();
    let zero = vec![Rat::zero(); l0.rank()];
    let y = weyl.y();
    let mut out = Vec::new();
    let mut push = |root: V00Root, c: Rat, expect_positive: bool| -> Result<()> {
        let p = root.vector().pair(&y, lattice)?;
        if p.is_zero() {
            return Err(Error::Consistency(format!("witness lies on the wall of {root:?}")));
        }
        if p.is_positive() != expect_positive {
            return Err(Error::Consistency(format!(
                "root {root:?} pairs to {p} against the witness, contrary to the chamber description"
            )));
        }
        if expect_positive {
            out.push((root, c));
        }
        Ok(())
    };
    // a = 0: x00 = b e1 - x0 with Q(x00) = Q(x0) <= m_max.
    for x0 in l0.enumerate_by_norm(&zero, &weyl.m_max) {
        let q = l0.q(&x0);
        let c = c_o(form, lattice, &-&q)?;
        if c.is_zero() {
            continue;
        }
        for b in 1..ceil_i64(&w[0]).max(1) {
            push(V00Root { a: 0, b, x0: x0.clone() }, c.clone(), true)?;
            push(V00Root { a: 0, b: -b, x0: x0.clone() }, c.clone(), false)?;
        }
        if !q.is_zero() {
            let positive = weyl
                .chamber
                .positive_roots()
                .any(|r| r.x0 == x0);
            push(V00Root { a: 0, b: 0, x0: x0.clone() }, c.clone(), positive)?;
        }
    }
    // a > 0: factor q2^a q1^b X^{-x0} enters grade a j at q1-exponent b j.
    for a in 1..=k {
        let ai = a as i64;
        let reach = (1..=k / a)
            .map(|j| &w[a * j] / int(j as i64))
            .max()
            .expect("a <= k");
        let b_lo = floor_i64(&(-&weyl.m_max / int(ai)));
        let b_hi = ceil_i64(&reach);
        for b in b_lo..b_hi {
            let norm_bound = int(ai * b) + &weyl.m_max;
            if norm_bound.is_negative() {
                continue;
            }
            for x0 in l0.enumerate_by_norm(&zero, &norm_bound) {
                let m = int(ai * b) - l0.q(&x0);
                let c = c_o(form, lattice, &m)?;
                if c.is_zero() {
                    continue;
                }
                push(V00Root { a: ai, b, x0 }, c, true)?;
            }
        }
    }
    Ok(out)
}

/// Working truncation per grade, `T_g = order + |rho_e1| + (K - g) m_max`.
fn windows(weyl: &WeylData, k: usize, order: &Rat) -> Vec<Rat> {
    let base = order + abs(&weyl.rho00.e1);
    (0..=k)
        .map(|g| &base + &weyl.m_max * int((k - g) as i64))
        .collect()
}

fn as_power(c: &Rat) -> Result<i64> {
    let p = ceil_i64(c);
    if int(p) != *c {
        return Err(Error::Unsupported(format!("non-integral exponent {c}")));
    }
    Ok(p)
}

/// `sum_j C(c, j) (-y)^j`, `y = q1^b X^key`, truncated to `q1^order`.
fn binomial_series(rank: usize, exp: &Rat, key: &[Rat], c: &Rat, max_j: usize, order: &Rat) -> Result<Vec<JacobiSeries>> {
    if !c.is_integer() {
        return Err(Error::Unsupported(format!("non-integral exponent {c}")));
    }
    let mut out = Vec::with_capacity(max_j + 1);
    let mut binom = Rat::one();
    for j in 0..=max_j {
        if j > 0 {
            binom = binom * (c - int(j as i64 - 1)) / int(j as i64);
        }
        let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
        let ji = int(j as i64);
        let mono = JacobiSeries::monomial(
            rank,
            &(exp * &ji),
            &key.iter().map(|v| v * &ji).collect::<Vec<_>>(),
            CycRational::from(&binom * sign),
        );
        out.push(mono.truncate(order));
    }
    Ok(out)
}

/// The part of the product with `a = 0`: `prod_{b>0} prod_{x0} (1 - q1^b X^{-x0})^{c}`.
pub fn b_factor_2(form: &VectorValuedForm, lattice: &WittLattice, m_max: &Rat, order: &Rat) -> Result<JacobiSeries> {
    let l0 = lattice.l0();
    let rank = l0.rank();
    let zero = vec![Rat::zero(); rank];
    let mut acc = JacobiSeries::one(rank).truncate(order);
    for x0 in l0.enumerate_by_norm(&zero, m_max) {
        let c = c_o(form, lattice, &-l0.q(&x0))?;
        if c.is_zero() {
            continue;
        }
        let power = as_power(&c)?;
        let key = keys_for(lattice, &x0, &-Rat::one());
        let mut b = 1;
        while &int(b) < order {
            acc = acc.checked_mul(&JacobiSeries::binomial_factor(
                rank,
                &int(b),
                &key,
                &CycRational::one(),
                power,
                order,
            )?)?;
            b += 1;
        }
    }
    Ok(acc.truncate(order))
}

/// `prod_{x0 in R0+} (1 - X^{-x0})^{c}`.
pub fn b_factor_3(form: &VectorValuedForm, lattice: &WittLattice, chamber: &Chamber0, order: &Rat) -> Result<JacobiSeries> {
    let rank = lattice.l0().rank();
    let mut acc = JacobiSeries::one(rank).truncate(order);
    for root in chamber.positive_roots() {
        let c = c_o(form, lattice, &-&root.q)?;
        let power = as_power(&c)?;
        let key = keys_for(lattice, &root.x0, &-Rat::one());
        acc = acc.checked_mul(&JacobiSeries::binomial_factor(
            rank,
            &Rat::zero(),
            &key,
            &CycRational::one(),
            power,
            order,
        )?)?;
    }
    Ok(acc.truncate(order))
}

/// The unit `(-1)^{B/2} i^B`, reading `(-1)^{B/2}` as `i^B`.
pub fn borcherds_unit(b: &Rat) -> CycRational {
    CycRational::e(&(b / int(2)))
}

/// `(-1)^{B/2} i^B q1^{(c_o(0) + 2B)/24} prod_{x0 in R0+} e((x0, w0))^{c/2}` as a
/// grade-0 monomial; the `q2^{I0}` part is the offset of the product.
pub fn b_factor_4(weyl: &WeylData, lattice: &WittLattice) -> JacobiSeries {
    let rank = lattice.l0().rank();
    JacobiSeries::monomial(
        rank,
        &weyl.rho00.e1,
        &keys_for(lattice, &weyl.rho00.x0, &Rat::one()),
        borcherds_unit(&weyl.b),
    )
}

/// `(-1)^{B/2} i^B e((rho00, z)) prod_{(x00, W00) > 0} (1 - e((x00, z)))^{c_o(-Q(x00))}`
/// through grade `k` (relative to the `q2^{-r'}` prefactor) and `q1^order`.
pub fn borcherds_side_product(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    weyl: &WeylData,
    k: usize,
    order: &Rat,
) -> Result<GradedFJSeries> {
    borcherds_side_product_with_rho(form, lattice, weyl, &weyl.rho00, k, order)
}

/// As `borcherds_side_product`, with the Weyl vector supplied explicitly.
pub fn borcherds_side_product_with_rho(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    weyl: &WeylData,
    rho: &V00Vector,
    k: usize,
    order: &Rat,
) -> Result<GradedFJSeries> {
    require_unimodular_support(form, lattice)?;
    let rank = lattice.l0().rank();
    let w = windows(weyl, k, order);
    let roots = positive_roots_in_window(form, lattice, weyl, k, order)?;
    let mut acc: Vec<JacobiSeries> = (0..=k)
        .map(|g| {
            let s = if g == 0 { JacobiSeries::one(rank) } else { JacobiSeries::zero(rank) };
            s.truncate(&w[g])
        })
        .collect();
    for (root, c) in &roots {
        let a = root.a as usize;
        let key = keys_for(lattice, &root.x0, &-Rat::one());
        if a == 0 {
            let factor = JacobiSeries::binomial_factor(
                rank,
                &int(root.b),
                &key,
                &CycRational::one(),
                as_power(c)?,
                &w[0],
            )?;
            for (g, slot) in acc.iter_mut().enumerate() {
                *slot = slot.checked_mul(&factor)?.truncate(&w[g]);
            }
            continue;
        }
        let terms = binomial_series(rank, &int(root.b), &key, c, k / a, &w[0])?;
        for g in (0..=k).rev() {
            let mut sum = acc[g].clone();
            for (j, mono) in terms.iter().enumerate().skip(1) {
                if a * j > g {
                    break;
                }
                sum = sum.checked_add(&acc[g - a * j].checked_mul(mono)?.truncate(&w[g]))?;
            }
            acc[g] = sum.truncate(&w[g]);
        }
    }
    let front = JacobiSeries::monomial(
        rank,
        &rho.e1,
        &keys_for(lattice, &rho.x0, &Rat::one()),
        borcherds_unit(&weyl.b),
    );
    let mut grades = Vec::with_capacity(k + 1);
    for (g, s) in acc.iter().enumerate() {
        let p = front.checked_mul(s)?;
        if p.trunc().is_some_and(|t| &t < order) {
            return Err(Error::Consistency(format!(
                "grade {g} known only below q1^{}, window needs {order}",
                p.trunc().expect("checked")
            )));
        }
        grades.push(p.truncate(order));
    }
    Ok(GradedFJSeries::new(-rho.e1p.clone(), grades))
}
