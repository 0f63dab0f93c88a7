//! Truncated Laurent-Puiseux series in `q` with group-algebra coefficients.
//!
//! A term `c * q^e * X^k` carries a rational exponent `e` and a key `k`, a
//! rational vector standing for the character `w -> e(k . w)` on the
//! coordinates of `w0`. Exponents are stored as integers over `scale`, keys as
//! integer vectors over `key_den`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use super::cyclotomic::CycRational;
use super::rational::{den_i64, int, lcm_i64, scaled, Rat};
use crate::error::{Error, Result};

/// Integer key vector; its meaning depends on the owning series' `key_den`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CharKey(pub Vec<i64>);

impl CharKey {
    pub fn zero(rank: usize) -> Self {
        CharKey(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    fn add(&self, other: &CharKey) -> CharKey {
        CharKey(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn scaled(&self, f: i64) -> CharKey {
        CharKey(self.0.iter().map(|a| a * f).collect())
    }
}

type Slice = BTreeMap<CharKey, CycRational>;

/// A truncated series; terms with exponent `>= trunc` are unknown.
#[derive(Clone)]
pub struct JacobiSeries {
    rank: usize,
    scale: i64,
    key_den: i64,
    terms: BTreeMap<i64, Slice>,
    trunc: Option<i64>,
}

/// A term in rational coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub exp: Rat,
    pub key: Vec<Rat>,
    pub coeff: CycRational,
}

/// First coefficient at which two series disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Difference {
    pub exp: Rat,
    pub key: Vec<Rat>,
    pub left: CycRational,
    pub right: CycRational,
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let key: Vec<String> = self.key.iter().map(|k| k.to_string()).collect();
        write!(
            f,
            "q^{} X^[{}]: {} vs {}",
            self.exp,
            key.join(","),
            self.left,
            self.right
        )
    }
}

fn key_den_of(key: &[Rat]) -> i64 {
    key.iter().fold(1, |acc, k| lcm_i64(acc, den_i64(k)))
}

fn add_into(slice: &mut Slice, key: CharKey, c: CycRational) {
    if c.is_zero() {
        return;
    }
    match slice.get_mut(&key) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                slice.remove(&key);
            }
        }
        None => {
            slice.insert(key, c);
        }
    }
}

impl JacobiSeries {
    /// The exact zero series.
    pub fn zero(rank: usize) -> Self {
        JacobiSeries {
            rank,
            scale: 1,
            key_den: 1,
            terms: BTreeMap::new(),
            trunc: None,
        }
    }

    /// `O(q^order)`.
    pub fn big_o(rank: usize, order: &Rat) -> Self {
        Self::zero(rank).truncate(order)
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, CycRational::one())
    }

    pub fn constant(rank: usize, c: CycRational) -> Self {
        Self::monomial(rank, &Rat::zero(), &vec![Rat::zero(); rank], c)
    }

    pub fn monomial(rank: usize, exp: &Rat, key: &[Rat], coeff: CycRational) -> Self {
        assert_eq!(key.len(), rank, "key length differs from rank");
        let scale = den_i64(exp);
        let key_den = key_den_of(key);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            let mut slice = Slice::new();
            slice.insert(
                CharKey(key.iter().map(|k| scaled(k, key_den)).collect()),
                coeff,
            );
            terms.insert(scaled(exp, scale), slice);
        }
        JacobiSeries {
            rank,
            scale,
            key_den,
            terms,
            trunc: None,
        }
    }

    /// Build from rational terms; equal positions are summed.
    pub fn from_terms<I>(rank: usize, terms: I, trunc: Option<Rat>) -> Self
    where
        I: IntoIterator<Item = (Rat, Vec<Rat>, CycRational)>,
    {
        let items: Vec<_> = terms.into_iter().collect();
        let mut scale = trunc.as_ref().map_or(1, den_i64);
        let mut key_den = 1;
        for (e, k, _) in &items {
            assert_eq!(k.len(), rank, "key length differs from rank");
            scale = lcm_i64(scale, den_i64(e));
            key_den = lcm_i64(key_den, key_den_of(k));
        }
        let t = trunc.as_ref().map(|t| scaled(t, scale));
        let mut map: BTreeMap<i64, Slice> = BTreeMap::new();
        for (e, k, c) in items {
            let ei = scaled(&e, scale);
            if t.is_some_and(|t| ei >= t) {
                continue;
            }
            let key = CharKey(k.iter().map(|v| scaled(v, key_den)).collect());
            add_into(map.entry(ei).or_default(), key, c);
        }
        map.retain(|_, s| !s.is_empty());
        JacobiSeries {
            rank,
            scale,
            key_den,
            terms: map,
            trunc: t,
        }
    }

    /// Rank-0 series from `(exponent, coefficient)` pairs.
    pub fn from_q_terms<I>(terms: I, trunc: Option<Rat>) -> Self
    where
        I: IntoIterator<Item = (Rat, Rat)>,
    {
        Self::from_terms(
            0,
            terms
                .into_iter()
                .map(|(e, c)| (e, Vec::new(), CycRational::from_rat(c))),
            trunc,
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn key_den(&self) -> i64 {
        self.key_den
    }

    pub fn trunc(&self) -> Option<Rat> {
        self.trunc.map(|t| Rat::new(t.into(), self.scale.into()))
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// True when no term is stored (the series may still be `O(q^t)`).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.values().map(|s| s.len()).sum()
    }

    /// Smallest stored exponent.
    pub fn valuation(&self) -> Option<Rat> {
        self.terms
            .keys()
            .next()
            .map(|&e| Rat::new(e.into(), self.scale.into()))
    }

    /// Largest stored exponent.
    pub fn max_exp(&self) -> Option<Rat> {
        self.terms
            .keys()
            .next_back()
            .map(|&e| Rat::new(e.into(), self.scale.into()))
    }

    fn exp_rat(&self, e: i64) -> Rat {
        Rat::new(e.into(), self.scale.into())
    }

    fn key_rat(&self, k: &CharKey) -> Vec<Rat> {
        k.0.iter()
            .map(|&v| Rat::new(v.into(), self.key_den.into()))
            .collect()
    }

    /// All terms in increasing exponent, then lexicographic key order.
    pub fn terms(&self) -> Vec<Term> {
        let mut out = Vec::with_capacity(self.num_terms());
        for (&e, slice) in &self.terms {
            for (k, c) in slice {
                out.push(Term {
                    exp: self.exp_rat(e),
                    key: self.key_rat(k),
                    coeff: c.clone(),
                });
            }
        }
        out
    }

    /// Distinct stored exponents.
    pub fn exponents(&self) -> Vec<Rat> {
        self.terms.keys().map(|&e| self.exp_rat(e)).collect()
    }

    pub fn coefficient(&self, exp: &Rat, key: &[Rat]) -> CycRational {
        if key.len() != self.rank {
            return CycRational::zero();
        }
        let e = exp * int(self.scale);
        if !e.is_integer() {
            return CycRational::zero();
        }
        let mut ki = Vec::with_capacity(key.len());
        for k in key {
            let v = k * int(self.key_den);
            if !v.is_integer() {
                return CycRational::zero();
            }
            ki.push(super::rational::to_i64(v.numer()));
        }
        let e = super::rational::to_i64(e.numer());
        self.terms
            .get(&e)
            .and_then(|s| s.get(&CharKey(ki)))
            .cloned()
            .unwrap_or_else(CycRational::zero)
    }

    /// Coefficient of `q^exp` for a rank-0 series.
    pub fn q_coefficient(&self, exp: &Rat) -> CycRational {
        self.coefficient(exp, &vec![Rat::zero(); self.rank])
    }

    /// Same as `q_coefficient` but insists on a rational value.
    pub fn q_coefficient_rat(&self, exp: &Rat) -> Rat {
        self.q_coefficient(exp)
            .as_rational()
            .expect("coefficient is not rational")
    }

    fn rescaled(&self, scale: i64, key_den: i64) -> Self {
        if scale == self.scale && key_den == self.key_den {
            return self.clone();
        }
        assert!(scale % self.scale == 0 && key_den % self.key_den == 0);
        let fs = scale / self.scale;
        let fk = key_den / self.key_den;
        let terms = self
            .terms
            .iter()
            .map(|(&e, s)| {
                let slice = if fk == 1 {
                    s.clone()
                } else {
                    s.iter().map(|(k, c)| (k.scaled(fk), c.clone())).collect()
                };
                (e * fs, slice)
            })
            .collect();
        JacobiSeries {
            rank: self.rank,
            scale,
            key_den,
            terms,
            trunc: self.trunc.map(|t| t * fs),
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let s = lcm_i64(self.scale, other.scale);
        let k = lcm_i64(self.key_den, other.key_den);
        (self.rescaled(s, k), other.rescaled(s, k))
    }

    /// Smallest scale and key denominator representing the same series.
    pub fn normalized(&self) -> Self {
        let mut g = self.scale;
        if let Some(t) = self.trunc {
            g = g.gcd(&t);
        }
        let mut gk = self.key_den;
        for (&e, slice) in &self.terms {
            g = g.gcd(&e);
            for k in slice.keys() {
                for &v in &k.0 {
                    gk = gk.gcd(&v);
                }
            }
        }
        if g == 1 && gk == 1 {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(&e, s)| {
                (
                    e / g,
                    s.iter()
                        .map(|(k, c)| (CharKey(k.0.iter().map(|v| v / gk).collect()), c.clone()))
                        .collect(),
                )
            })
            .collect();
        JacobiSeries {
            rank: self.rank,
            scale: self.scale / g,
            key_den: self.key_den / gk,
            terms,
            trunc: self.trunc.map(|t| t / g),
        }
    }

    /// Drop all terms at or above `order` and lower the truncation accordingly.
    pub fn truncate(&self, order: &Rat) -> Self {
        let scale = lcm_i64(self.scale, den_i64(order));
        let mut s = self.rescaled(scale, self.key_den);
        let t = scaled(order, scale);
        let t = s.trunc.map_or(t, |old| old.min(t));
        let _ = s.terms.split_off(&t);
        s.trunc = Some(t);
        s
    }

    /// Forget the truncation: the stored terms as an exact polynomial.
    pub fn as_polynomial(&self) -> Self {
        let mut s = self.clone();
        s.trunc = None;
        s
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let (mut a, b) = self.aligned(other);
        let trunc = match (a.trunc, b.trunc) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        for (e, slice) in b.terms {
            if trunc.is_some_and(|t| e >= t) {
                continue;
            }
            let dst = a.terms.entry(e).or_default();
            for (k, c) in slice {
                add_into(dst, k, c);
            }
        }
        if let Some(t) = trunc {
            let _ = a.terms.split_off(&t);
        }
        a.terms.retain(|_, s| !s.is_empty());
        a.trunc = trunc;
        Ok(a)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scalar_mul(&CycRational::from_int(-1))
    }

    pub fn scalar_mul(&self, c: &CycRational) -> Self {
        if c.is_zero() {
            let mut z = Self::zero(self.rank);
            z.scale = self.scale;
            z.trunc = self.trunc;
            return z;
        }
        let mut s = self.clone();
        for slice in s.terms.values_mut() {
            for v in slice.values_mut() {
                *v = &*v * c;
            }
        }
        s
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scalar_mul(&CycRational::from_rat(r.clone()))
    }

    /// Lowest exponent, or the truncation when no term is stored; `None` for exact zero.
    fn low(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.trunc)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let (a, b) = self.aligned(other);
        let (Some(va), Some(vb)) = (a.low(), b.low()) else {
            let mut z = Self::zero(self.rank);
            z.scale = a.scale;
            z.key_den = a.key_den;
            return Ok(z);
        };
        let trunc = match (a.trunc.map(|t| t + vb), b.trunc.map(|t| t + va)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let mut out: BTreeMap<i64, Slice> = BTreeMap::new();
        for (&ea, sa) in &a.terms {
            if trunc.is_some_and(|t| ea + vb >= t) {
                break;
            }
            for (&eb, sb) in &b.terms {
                let e = ea + eb;
                if trunc.is_some_and(|t| e >= t) {
                    break;
                }
                let dst = out.entry(e).or_default();
                for (ka, ca) in sa {
                    for (kb, cb) in sb {
                        add_into(dst, ka.add(kb), ca * cb);
                    }
                }
            }
        }
        out.retain(|_, s| !s.is_empty());
        Ok(JacobiSeries {
            rank: a.rank,
            scale: a.scale,
            key_den: a.key_den,
            terms: out,
            trunc,
        })
    }

    /// Non-negative integer power.
    pub fn pow_u(&self, k: u64) -> Self {
        let mut acc = Self::one(self.rank);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents invert first, through `order`.
    pub fn pow(&self, k: i64, order: &Rat) -> Result<Self> {
        if k >= 0 {
            return Ok(self.pow_u(k as u64));
        }
        // Invert with enough room for the power's own shift.
        let v = self
            .valuation()
            .ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        let inv_order = order + &v * int(-k - 1);
        Ok(self.invert(&inv_order)?.pow_u(k.unsigned_abs()).truncate(order))
    }

    /// Multiplicative inverse through `order`.
    pub fn invert(&self, order: &Rat) -> Result<Self> {
        let (&v, lead) = self
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        if lead.len() != 1 || !lead.keys().next().is_some_and(|k| k.is_zero()) {
            return Err(Error::NotInvertible(
                "leading coefficient is not a unit scalar".into(),
            ));
        }
        let u = lead.values().next().cloned().expect("nonempty slice");
        let u_inv = u.inverse()?;
        let v_rat = self.exp_rat(v);
        let zero_key = vec![Rat::zero(); self.rank];
        // self = u q^v (1 + t), val(t) > 0.
        let normal = (&Self::monomial(self.rank, &-&v_rat, &zero_key, u_inv.clone())) * self;
        let t = normal.checked_sub(&Self::one(self.rank))?;
        let mut g_order = order + &v_rat;
        if let Some(tr) = normal.trunc() {
            if tr < g_order {
                g_order = tr;
            }
        }
        let neg_t = t.neg().truncate(&g_order);
        let mut g = Self::one(self.rank).truncate(&g_order);
        let mut p = Self::one(self.rank).truncate(&g_order);
        loop {
            p = (&p * &neg_t).truncate(&g_order);
            if p.is_zero() {
                break;
            }
            g = g.checked_add(&p)?;
        }
        let r = &Self::monomial(self.rank, &-&v_rat, &zero_key, u_inv) * &g;
        Ok(r.truncate(order))
    }

    /// Multiply by the exact monomial `q^exp X^key`.
    pub fn shift(&self, exp: &Rat, key: &[Rat]) -> Self {
        self * &Self::monomial(self.rank, exp, key, CycRational::one())
    }

    /// `(1 - c q^exp X^key)^power` through `order`.
    ///
    /// With `exp > 0` this is the binomial series. With `exp = 0` only a
    /// non-negative power, or a constant factor, has an expansion.
    pub fn binomial_factor(
        rank: usize,
        exp: &Rat,
        key: &[Rat],
        c: &CycRational,
        power: i64,
        order: &Rat,
    ) -> Result<Self> {
        if exp < &Rat::zero() {
            return Err(Error::Unsupported(format!(
                "factor with negative q-exponent {exp}"
            )));
        }
        if exp.is_zero() {
            let base = Self::one(rank).checked_sub(&Self::monomial(rank, exp, key, c.clone()))?;
            if power >= 0 {
                return Ok(base.pow_u(power as u64).truncate(order));
            }
            if key.iter().all(|k| k.is_zero()) {
                let inv = (&CycRational::one() - c).inverse()?.pow(-power)?;
                return Ok(Self::constant(rank, inv).truncate(order));
            }
            return Err(Error::Unsupported(
                "negative power of a factor without q-decay".into(),
            ));
        }
        let mut items = Vec::new();
        let mut binom = Rat::from_integer(1.into());
        let mut y = CycRational::one();
        let mut j: i64 = 0;
        while &(exp * int(j)) < order {
            if binom.is_zero() {
                break;
            }
            let sign = if j % 2 == 0 { int(1) } else { int(-1) };
            items.push((
                exp * int(j),
                key.iter().map(|k| k * int(j)).collect(),
                y.scale(&(&binom * sign)),
            ));
            binom = binom * int(power - j) / int(j + 1);
            y = &y * c;
            j += 1;
        }
        Ok(Self::from_terms(rank, items, Some(order.clone())))
    }

    /// `q -> q^n`, `X -> X^n`.
    pub fn frobenius(&self, n: i64) -> Self {
        assert!(n >= 1);
        let terms = self
            .terms
            .iter()
            .map(|(&e, s)| {
                (
                    e * n,
                    s.iter().map(|(k, c)| (k.scaled(n), c.clone())).collect(),
                )
            })
            .collect();
        JacobiSeries {
            rank: self.rank,
            scale: self.scale,
            key_den: self.key_den,
            terms,
            trunc: self.trunc.map(|t| t * n),
        }
    }

    /// `X -> X^f` for an integer factor (possibly negative).
    pub fn scale_keys(&self, f: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&e, s)| {
                let mut slice = Slice::new();
                for (k, c) in s {
                    add_into(&mut slice, k.scaled(f), c.clone());
                }
                (e, slice)
            })
            .filter(|(_, s)| !s.is_empty())
            .collect();
        JacobiSeries {
            terms,
            ..self.clone()
        }
    }

    pub fn negate_keys(&self) -> Self {
        self.scale_keys(-1)
    }

    /// Apply a linear map to keys: `new_key = mat * key` with `mat` of shape `new_rank x rank`.
    pub fn map_keys(&self, new_rank: usize, mat: &[Vec<Rat>]) -> Self {
        assert_eq!(mat.len(), new_rank);
        let mut items = Vec::with_capacity(self.num_terms());
        for t in self.terms() {
            let nk: Vec<Rat> = mat
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&t.key)
                        .fold(Rat::zero(), |acc, (m, k)| acc + m * k)
                })
                .collect();
            items.push((t.exp, nk, t.coeff));
        }
        Self::from_terms(new_rank, items, self.trunc())
    }

    /// Embed a rank-0 series with zero keys of length `rank`.
    pub fn lift_rank(&self, rank: usize) -> Self {
        assert_eq!(self.rank, 0, "only rank-0 series lift");
        let terms = self
            .terms
            .iter()
            .map(|(&e, s)| {
                (
                    e,
                    s.values()
                        .map(|c| (CharKey::zero(rank), c.clone()))
                        .collect(),
                )
            })
            .collect();
        JacobiSeries {
            rank,
            scale: self.scale,
            key_den: 1,
            terms,
            trunc: self.trunc,
        }
    }

    /// Specialize every character to 1 (sum over keys at each exponent).
    pub fn sum_over_keys(&self) -> Self {
        let items = self
            .terms()
            .into_iter()
            .map(|t| (t.exp, Vec::new(), t.coeff));
        Self::from_terms(0, items, self.trunc())
    }

    /// The coefficient series of one key, as a rank-0 series.
    pub fn key_component(&self, key: &[Rat]) -> Self {
        let items = self
            .terms()
            .into_iter()
            .filter(|t| t.key == key)
            .map(|t| (t.exp, Vec::new(), t.coeff));
        Self::from_terms(0, items, self.trunc())
    }

    /// Translate `w0 -> w0 + b1 tau + b2` for integral `b1`, `b2`.
    ///
    /// A term `q^e X^k` becomes `e(k.b2) q^(e + k.b1) X^k`. The input must be
    /// exact: a truncated series carries no information about the keys of its
    /// omitted tail, so no window can be certified for the result. Translate
    /// `as_polynomial()` and re-truncate using knowledge of the series instead.
    pub fn substitute_w0_translation(&self, b1: &[i64], b2: &[i64]) -> Result<Self> {
        if b1.len() != self.rank || b2.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: b1.len().max(b2.len()),
            });
        }
        if self.trunc.is_some() {
            return Err(Error::Unsupported(
                "translation of a truncated series; use as_polynomial() first".into(),
            ));
        }
        let items = self.terms().into_iter().map(|t| {
            let p1 = t
                .key
                .iter()
                .zip(b1)
                .fold(Rat::zero(), |acc, (k, &b)| acc + k * int(b));
            let p2 = t
                .key
                .iter()
                .zip(b2)
                .fold(Rat::zero(), |acc, (k, &b)| acc + k * int(b));
            let phase = CycRational::e(&p2);
            (t.exp + p1, t.key, &t.coeff * &phase)
        });
        Ok(Self::from_terms(self.rank, items, None))
    }

    /// First coefficient (in exponent, then key order) where the series differ,
    /// compared below the smaller truncation.
    pub fn first_difference(&self, other: &Self) -> Option<Difference> {
        if self.rank != other.rank {
            return Some(Difference {
                exp: Rat::zero(),
                key: Vec::new(),
                left: CycRational::from_int(self.rank as i64),
                right: CycRational::from_int(other.rank as i64),
            });
        }
        let (a, b) = self.aligned(other);
        let limit = match (a.trunc, b.trunc) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let mut exps: Vec<i64> = a.terms.keys().chain(b.terms.keys()).copied().collect();
        exps.sort_unstable();
        exps.dedup();
        let empty = Slice::new();
        for e in exps {
            if limit.is_some_and(|t| e >= t) {
                break;
            }
            let sa = a.terms.get(&e).unwrap_or(&empty);
            let sb = b.terms.get(&e).unwrap_or(&empty);
            let mut keys: Vec<&CharKey> = sa.keys().chain(sb.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let ca = sa.get(k).cloned().unwrap_or_else(CycRational::zero);
                let cb = sb.get(k).cloned().unwrap_or_else(CycRational::zero);
                if ca != cb {
                    return Some(Difference {
                        exp: a.exp_rat(e),
                        key: a.key_rat(k),
                        left: ca,
                        right: cb,
                    });
                }
            }
        }
        None
    }

    /// Coefficientwise agreement below the smaller truncation.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// Agreement below `order` (both operands must be known there).
    pub fn agrees_through(&self, other: &Self, order: &Rat) -> bool {
        self.truncate(order).agrees_with(&other.truncate(order))
    }

    /// The scalar `u` with `self = u * other`, if one exists on the common window.
    pub fn ratio_to(&self, other: &Self) -> Option<CycRational> {
        let lead = other.terms().into_iter().next()?;
        let c = self.coefficient(&lead.exp, &lead.key);
        let u = &c * &lead.coeff.inverse().ok()?;
        if self.agrees_with(&other.scalar_mul(&u)) {
            Some(u)
        } else {
            None
        }
    }
}

impl PartialEq for JacobiSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.rank != other.rank {
            return false;
        }
        let (a, b) = self.aligned(other);
        a.trunc == b.trunc && a.terms == b.terms
    }
}

impl<'a> std::ops::Add<&'a JacobiSeries> for &'a JacobiSeries {
    type Output = JacobiSeries;
    fn add(self, rhs: &JacobiSeries) -> JacobiSeries {
        self.checked_add(rhs).expect("series addition")
    }
}

impl<'a> std::ops::Sub<&'a JacobiSeries> for &'a JacobiSeries {
    type Output = JacobiSeries;
    fn sub(self, rhs: &JacobiSeries) -> JacobiSeries {
        self.checked_sub(rhs).expect("series subtraction")
    }
}

impl<'a> std::ops::Mul<&'a JacobiSeries> for &'a JacobiSeries {
    type Output = JacobiSeries;
    fn mul(self, rhs: &JacobiSeries) -> JacobiSeries {
        self.checked_mul(rhs).expect("series multiplication")
    }
}

impl std::ops::Neg for &JacobiSeries {
    type Output = JacobiSeries;
    fn neg(self) -> JacobiSeries {
        JacobiSeries::neg(self)
    }
}

impl fmt::Debug for JacobiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for JacobiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", t.coeff)?;
            if !t.exp.is_zero() {
                write!(f, "*q^{}", t.exp)?;
            }
            if t.key.iter().any(|k| !k.is_zero()) {
                let k: Vec<String> = t.key.iter().map(|v| v.to_string()).collect();
                write!(f, "*X^[{}]", k.join(","))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(t) = self.trunc() {
            write!(f, " + O(q^{t})")?;
        }
        Ok(())
    }
}
