//! Exact arithmetic in cyclotomic fields `Q(zeta_M)`.
//!
//! A value is stored in the power basis `1, zeta, ..., zeta^(phi(M)-1)` reduced
//! modulo the `M`-th cyclotomic polynomial. Binary operations lift both operands
//! to the least common multiple of their orders.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rat, Rat};
use crate::error::{Error, Result};

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().lock().expect("cache poisoned").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num: Vec<i64> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_polynomial(d);
            num = exact_divide(&num, &den);
        }
    }
    let arc = Arc::new(num);
    phi_cache()
        .lock()
        .expect("cache poisoned")
        .insert(n, arc.clone());
    arc
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn reduce_poly(order: u64, mut poly: Vec<Rat>) -> Vec<Rat> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            if poly[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[i], Rat::zero());
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    let idx = i - deg + j;
                    poly[idx] -= &c * Rat::from_integer(BigInt::from(pj));
                }
            }
        }
    }
    poly.resize(deg, Rat::zero());
    poly
}

/// An element of `Q(zeta_M)`.
#[derive(Clone)]
pub struct CycRational {
    order: u64,
    coeffs: Vec<Rat>,
}

impl CycRational {
    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        CycRational {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat(n, 1))
    }

    /// The root of unity `e(p/q) = zeta_q^p`.
    pub fn root_of_unity(p: i64, q: u64) -> Self {
        assert!(q >= 1);
        let g = (p.rem_euclid(q as i64) as u64).gcd(&q);
        let (p, q) = ((p.rem_euclid(q as i64) as u64) / g, q / g);
        if q == 1 {
            return Self::one();
        }
        if q == 2 {
            return Self::from_int(-1);
        }
        let mut poly = vec![Rat::zero(); p as usize + 1];
        poly[p as usize] = Rat::one();
        Self::from_poly(q, poly)
    }

    /// `e(r)` for a rational `r`.
    pub fn e(r: &Rat) -> Self {
        let q = r.denom();
        let p = r.numer().mod_floor(q);
        let q64: u64 = q.try_into().expect("root of unity order too large");
        let p64: i64 = (&p).try_into().expect("root of unity exponent too large");
        Self::root_of_unity(p64, q64)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::root_of_unity(1, 4)
    }

    /// Build from a polynomial in `zeta_order`; canonical order normalization applied.
    pub fn from_poly(order: u64, poly: Vec<Rat>) -> Self {
        if order <= 2 {
            let sign = if order == 2 { -1 } else { 1 };
            let mut acc = Rat::zero();
            for (j, c) in poly.into_iter().enumerate() {
                if j % 2 == 1 && sign == -1 {
                    acc -= c;
                } else {
                    acc += c;
                }
            }
            return Self::from_rat(acc);
        }
        if order % 4 == 2 {
            // zeta_{2k} = -zeta_k^{(k+1)/2} for odd k.
            let k = order / 2;
            let step = k.div_ceil(2) as usize;
            let mut out = vec![Rat::zero(); step * poly.len().max(1)];
            for (j, c) in poly.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let idx = (j * step) % k as usize;
                if j % 2 == 1 {
                    out[idx] -= c;
                } else {
                    out[idx] += c;
                }
            }
            return Self::from_poly(k, out);
        }
        let mut folded = vec![Rat::zero(); order as usize];
        for (j, c) in poly.into_iter().enumerate() {
            folded[j % order as usize] += c;
        }
        let coeffs = reduce_poly(order, folded);
        CycRational { order, coeffs }.collapse()
    }

    fn collapse(self) -> Self {
        if self.order > 1 && self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            let c0 = self.coeffs.into_iter().next().unwrap_or_else(Rat::zero);
            return Self::from_rat(c0);
        }
        self
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Reduced power-basis coefficients at the current order.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.order == 1 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in `Q(zeta_target)`; `self.order` must divide `target`.
    fn lift(&self, target: u64) -> Vec<Rat> {
        if target == self.order {
            return self.coeffs.clone();
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![Rat::zero(); target as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(j * step) % target as usize] += c;
            }
        }
        reduce_poly(target, poly)
    }

    fn common_order(a: u64, b: u64) -> u64 {
        a.lcm(&b)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycRational {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse via the multiplication-by-`self` matrix.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero scalar".into()));
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rat(r.recip()));
        }
        let m = self.order;
        let d = self.coeffs.len();
        // Column j holds self * zeta^j.
        let mut mat = vec![vec![Rat::zero(); d]; d];
        for j in 0..d {
            let mut poly = vec![Rat::zero(); m as usize];
            for (i, c) in self.coeffs.iter().enumerate() {
                poly[(i + j) % m as usize] += c;
            }
            let col = reduce_poly(m, poly);
            for (i, v) in col.into_iter().enumerate() {
                mat[i][j] = v;
            }
        }
        let mut rhs = vec![Rat::zero(); d];
        rhs[0] = Rat::one();
        let sol = solve_linear(mat, rhs)
            .ok_or_else(|| Error::NotInvertible("singular cyclotomic element".into()))?;
        Ok(CycRational {
            order: m,
            coeffs: sol,
        }
        .collapse())
    }

    /// If `self` is a root of unity, the `r` in `[0,1)` with `self = e(r)`.
    pub fn root_of_unity_exponent(&self) -> Option<Rat> {
        let m = 2 * self.order.lcm(&2);
        (0..m)
            .map(|k| rat(k as i64, m as i64))
            .find(|r| Self::e(r) == *self)
    }

    /// The value written in the smallest cyclotomic field that contains it.
    pub fn canonical(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let m = self.order;
        let mut divisors: Vec<u64> = (1..m).filter(|d| m.is_multiple_of(*d) && d % 4 != 2).collect();
        divisors.sort_unstable();
        for d in divisors {
            if d == 1 {
                continue;
            }
            let phi_d = totient(d) as usize;
            let step = (m / d) as usize;
            let rows = self.coeffs.len();
            let mut mat = vec![vec![Rat::zero(); phi_d]; rows];
            for j in 0..phi_d {
                let mut poly = vec![Rat::zero(); m as usize];
                poly[(j * step) % m as usize] = Rat::one();
                for (i, v) in reduce_poly(m, poly).into_iter().enumerate() {
                    mat[i][j] = v;
                }
            }
            if let Some(sol) = solve_overdetermined(mat, self.coeffs.clone()) {
                return CycRational {
                    order: d,
                    coeffs: sol,
                }
                .collapse();
            }
        }
        self.clone()
    }
}

/// Solve a square system exactly; `None` if singular.
pub(crate) fn solve_linear(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Solve `a x = b` for a tall matrix; `None` if inconsistent.
fn solve_overdetermined(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, piv);
        b.swap(row, piv);
        let inv = a[row][col].recip();
        for c in col..cols {
            a[row][c] = &a[row][c] * &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..cols {
                    let t = &f * &a[row][c];
                    a[r][c] -= t;
                }
                let t = &f * &b[row];
                b[r] -= t;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

impl PartialEq for CycRational {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let m = Self::common_order(self.order, other.order);
        self.lift(m) == other.lift(m)
    }
}

impl Eq for CycRational {}

impl From<Rat> for CycRational {
    fn from(r: Rat) -> Self {
        Self::from_rat(r)
    }
}

impl<'a> Add<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn add(self, rhs: &CycRational) -> CycRational {
        if self.order == 1 && rhs.order == 1 {
            return CycRational::from_rat(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        let m = CycRational::common_order(self.order, rhs.order);
        let a = self.lift(m);
        let b = rhs.lift(m);
        CycRational {
            order: m,
            coeffs: a.iter().zip(b.iter()).map(|(x, y)| x + y).collect(),
        }
        .collapse()
    }
}

impl<'a> Sub<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn sub(self, rhs: &CycRational) -> CycRational {
        self + &(-rhs)
    }
}

impl Neg for &CycRational {
    type Output = CycRational;
    fn neg(self) -> CycRational {
        CycRational {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycRational {
    type Output = CycRational;
    fn neg(self) -> CycRational {
        -&self
    }
}

impl<'a> Mul<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn mul(self, rhs: &CycRational) -> CycRational {
        if self.order == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.order == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let m = CycRational::common_order(self.order, rhs.order);
        let a = self.lift(m);
        let b = rhs.lift(m);
        let mut prod = vec![Rat::zero(); 2 * a.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CycRational {
            order: m,
            coeffs: reduce_poly(m, prod),
        }
        .collapse()
    }
}

impl Add for CycRational {
    type Output = CycRational;
    fn add(self, rhs: CycRational) -> CycRational {
        &self + &rhs
    }
}

impl Sub for CycRational {
    type Output = CycRational;
    fn sub(self, rhs: CycRational) -> CycRational {
        &self - &rhs
    }
}

impl Mul for CycRational {
    type Output = CycRational;
    fn mul(self, rhs: CycRational) -> CycRational {
        &self * &rhs
    }
}

impl fmt::Debug for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        if let Some(r) = c.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        write!(f, "(")?;
        for (j, v) in c.coeffs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let sign = if v.is_negative() { "-" } else { "+" };
            if first {
                if v.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = v.abs();
            match j {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if j == 1 {
                        write!(f, "z{}", c.order)?;
                    } else {
                        write!(f, "z{}^{j}", c.order)?;
                    }
                }
            }
        }
        write!(f, ")")
    }
}
