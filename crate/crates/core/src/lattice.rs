//! Even lattices in adapted coordinates: the positive-definite block `L0`,
//! its discriminant group, norm-bounded enumeration, and the full coset data
//! `(lam0, lam1, lam2)` of a Witt-decomposed lattice with scaling `N`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::cyclotomic::solve_linear;
use crate::exactmath::rational::{ceil_i64, den_i64, floor_i64, frac, int, lcm_i64, to_f64, Rat};

/// A positive-definite even lattice given by its Gram matrix.
#[derive(Clone, Debug)]
pub struct PosDefLattice {
    gram: Vec<Vec<i64>>,
    // Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2
    d: Vec<Rat>,
    mu: Vec<Vec<Rat>>,
    gram_inv: Vec<Vec<Rat>>,
    det: i64,
}

impl PartialEq for PosDefLattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl PosDefLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidLattice(format!(
                    "Gram row {i} has length {} (expected {n})",
                    row.len()
                )));
            }
            if row[i] % 2 != 0 {
                return Err(Error::InvalidLattice(format!(
                    "odd diagonal entry {} at position {i}",
                    row[i]
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if gram[j][i] != v {
                    return Err(Error::InvalidLattice(format!(
                        "Gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let half: Vec<Vec<Rat>> = gram
            .iter()
            .map(|r| r.iter().map(|&v| Rat::new(v.into(), 2.into())).collect())
            .collect();
        let mut d = vec![Rat::zero(); n];
        let mut mu = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            let mut di = half[i][i].clone();
            for k in 0..i {
                di -= &d[k] * &mu[k][i] * &mu[k][i];
            }
            if !di.is_positive() {
                return Err(Error::InvalidLattice(format!(
                    "Gram matrix is not positive definite (pivot {i} is {di})"
                )));
            }
            for j in i + 1..n {
                let mut v = half[i][j].clone();
                for k in 0..i {
                    v -= &d[k] * &mu[k][i] * &mu[k][j];
                }
                mu[i][j] = v / &di;
            }
            d[i] = di;
        }
        // det G = 2^n prod d_i
        let mut det = Rat::one();
        for di in &d {
            det *= di * int(2);
        }
        let det = crate::exactmath::rational::to_i64(det.numer());
        let mut gram_inv = vec![vec![Rat::zero(); n]; n];
        for j in 0..n {
            let a: Vec<Vec<Rat>> = gram
                .iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect();
            let mut e = vec![Rat::zero(); n];
            e[j] = Rat::one();
            let col = solve_linear(a, e).expect("positive definite matrix is invertible");
            for (i, v) in col.into_iter().enumerate() {
                gram_inv[i][j] = v;
            }
        }
        Ok(PosDefLattice {
            gram,
            d,
            mu,
            gram_inv,
            det,
        })
    }

    /// The zero lattice.
    pub fn rank_zero() -> Self {
        Self::new(Vec::new()).expect("empty Gram matrix")
    }

    /// `<2k>`.
    pub fn a1_scaled(k: i64) -> Self {
        Self::new(vec![vec![2 * k]]).expect("positive diagonal")
    }

    pub fn a2() -> Self {
        Self::new(vec![vec![2, -1], vec![-1, 2]]).expect("A2 Cartan matrix")
    }

    /// The E8 root lattice with the Cartan matrix as Gram matrix.
    pub fn e8() -> Self {
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let mut g = vec![vec![0i64; 8]; 8];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in edges {
            g[a][b] = -1;
            g[b][a] = -1;
        }
        Self::new(g).expect("E8 Cartan matrix")
    }

    pub fn direct_sum(parts: &[PosDefLattice]) -> Self {
        let n: usize = parts.iter().map(|p| p.rank()).sum();
        let mut g = vec![vec![0i64; n]; n];
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    g[off + i][off + j] = p.gram[i][j];
                }
            }
            off += p.rank();
        }
        Self::new(g).expect("direct sum of positive definite lattices")
    }

    pub fn e8_cubed() -> Self {
        let e8 = Self::e8();
        Self::direct_sum(&[e8.clone(), e8.clone(), e8])
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn gram_inverse(&self) -> &[Vec<Rat>] {
        &self.gram_inv
    }

    pub fn is_unimodular(&self) -> bool {
        self.det == 1
    }

    fn check_len(&self, x: &[Rat]) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `G x`.
    pub fn gram_mul(&self, x: &[Rat]) -> Vec<Rat> {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(Rat::zero(), |acc, (&g, v)| acc + int(g) * v)
            })
            .collect()
    }

    /// The bilinear form `x^T G y`.
    pub fn gram_pair(&self, x: &[Rat], y: &[Rat]) -> Result<Rat> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self
            .gram_mul(x)
            .iter()
            .zip(y)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b))
    }

    /// `Q(x) = x^T G x / 2`.
    pub fn q(&self, x: &[Rat]) -> Rat {
        self.gram_pair(x, x).expect("vector length matches rank") / int(2)
    }

    /// Exponent of `L0^dual / L0`.
    pub fn dual_exponent(&self) -> i64 {
        self.gram_inv
            .iter()
            .flatten()
            .fold(1, |acc, v| lcm_i64(acc, den_i64(v)))
    }

    /// Level: smallest `l` with `l Q(x)` integral on the dual lattice.
    pub fn level(&self) -> i64 {
        let mut l = self.dual_exponent();
        for c in discriminant_cosets(self).expect("valid lattice") {
            l = lcm_i64(l, den_i64(&c.q));
        }
        l
    }

    /// All `x` in `lam0 + L0` with `Q(x) <= bound`, sorted lexicographically.
    pub fn enumerate_by_norm(&self, lam0: &[Rat], bound: &Rat) -> Vec<Vec<Rat>> {
        assert_eq!(lam0.len(), self.rank(), "coset length differs from rank");
        let n = self.rank();
        if bound.is_negative() {
            return Vec::new();
        }
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        let mut x = vec![Rat::zero(); n];
        self.descend(n - 1, lam0, bound.clone(), &mut x, &mut out);
        out.sort();
        out
    }

    fn descend(&self, i: usize, lam0: &[Rat], rem: Rat, x: &mut Vec<Rat>, out: &mut Vec<Vec<Rat>>) {
        let mut center = Rat::zero();
        for j in i + 1..self.rank() {
            center -= &self.mu[i][j] * &x[j];
        }
        let radius = (to_f64(&rem) / to_f64(&self.d[i])).max(0.0).sqrt();
        let cf = to_f64(&center);
        let shift = &lam0[i];
        // Integer offsets y with x_i = shift + y; padded float range, exact filter.
        let lo = floor_i64(&(Rat::from_float(cf - radius).unwrap_or_else(Rat::zero) - shift)) - 1;
        let hi = ceil_i64(&(Rat::from_float(cf + radius).unwrap_or_else(Rat::zero) - shift)) + 1;
        for y in lo..=hi {
            let xi = shift + int(y);
            let t = &xi - &center;
            let used = &self.d[i] * &t * &t;
            if used > rem {
                continue;
            }
            x[i] = xi;
            if i == 0 {
                out.push(x.clone());
            } else {
                self.descend(i - 1, lam0, &rem - &used, x, out);
            }
        }
        x[i] = Rat::zero();
    }
}

/// A class of `L0^dual / L0` with its norm modulo 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCoset {
    /// Representative with coordinates (in the `L0` basis) in `[0, 1)`.
    pub rep: Vec<Rat>,
    /// `Q(rep)` reduced into `[0, 1)`.
    pub q: Rat,
}

/// Reduce coordinates into `[0, 1)`.
pub fn reduce_mod_one(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(frac).collect()
}

/// The classes of `L0^dual / L0`, sorted by representative.
pub fn discriminant_cosets(l0: &PosDefLattice) -> Result<Vec<DualCoset>> {
    let n = l0.rank();
    let gens: Vec<Vec<Rat>> = (0..n)
        .map(|j| reduce_mod_one(&(0..n).map(|i| l0.gram_inv[i][j].clone()).collect::<Vec<_>>()))
        .collect();
    let zero = vec![Rat::zero(); n];
    let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
    seen.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for g in &gens {
            let w = reduce_mod_one(&v.iter().zip(g).map(|(a, b)| a + b).collect::<Vec<_>>());
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    if seen.len() as i64 != l0.det() {
        return Err(Error::Consistency(format!(
            "found {} dual cosets but det = {}",
            seen.len(),
            l0.det()
        )));
    }
    Ok(seen
        .into_iter()
        .map(|rep| {
            let q = frac(&l0.q(&rep));
            DualCoset { rep, q }
        })
        .collect())
}

/// A class `lam = lam0 + lam1 + lam2` of the full discriminant group.
///
/// `lam1 = (lam11, lam12)` lies in `(Z/N)^2`; `lam2 = (lam21, lam22)` lies in
/// `(N^-1 Z / Z)^2` and is stored by numerators over `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscCoset {
    pub lam0: Vec<Rat>,
    pub lam1: [u64; 2],
    pub lam2: [u64; 2],
}

/// An even lattice `L = N M_U'^dual + L0 + M_U` in adapted coordinates.
#[derive(Clone, Debug)]
pub struct WittLattice {
    l0: PosDefLattice,
    n: u64,
    l0_cosets: Vec<DualCoset>,
    cosets: Vec<DiscCoset>,
    index: HashMap<DiscCoset, usize>,
}

impl WittLattice {
    pub fn new(l0: PosDefLattice, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLattice("N must be positive".into()));
        }
        let l0_cosets = discriminant_cosets(&l0)?;
        let mut cosets = Vec::with_capacity(l0_cosets.len() * (n as usize).pow(4));
        for c in &l0_cosets {
            for a in 0..n {
                for b in 0..n {
                    for x in 0..n {
                        for y in 0..n {
                            cosets.push(DiscCoset {
                                lam0: c.rep.clone(),
                                lam1: [a, b],
                                lam2: [x, y],
                            });
                        }
                    }
                }
            }
        }
        cosets.sort();
        let index = cosets
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Ok(WittLattice {
            l0,
            n,
            l0_cosets,
            cosets,
            index,
        })
    }

    /// `N = 1` with the given `L0`.
    pub fn unimodular_hyperbolic(l0: PosDefLattice) -> Self {
        Self::new(l0, 1).expect("valid L0")
    }

    pub fn l0(&self) -> &PosDefLattice {
        &self.l0
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(rank(L0) + 2, 2)`.
    pub fn signature(&self) -> (usize, usize) {
        (self.l0.rank() + 2, 2)
    }

    /// Total dimension `rank(L0) + 4`; the weight of an input form is `1 - (rank(L0)+2)/2`.
    pub fn dimension(&self) -> usize {
        self.l0.rank() + 4
    }

    pub fn l0_cosets(&self) -> &[DualCoset] {
        &self.l0_cosets
    }

    pub fn cosets(&self) -> &[DiscCoset] {
        &self.cosets
    }

    pub fn coset(&self, id: usize) -> &DiscCoset {
        &self.cosets[id]
    }

    pub fn num_cosets(&self) -> usize {
        self.cosets.len()
    }

    /// Id of the class containing the given data (reduced first).
    pub fn find(&self, lam0: &[Rat], lam1: [i64; 2], lam2: [i64; 2]) -> Option<usize> {
        let n = self.n as i64;
        let c = DiscCoset {
            lam0: reduce_mod_one(lam0),
            lam1: [lam1[0].rem_euclid(n) as u64, lam1[1].rem_euclid(n) as u64],
            lam2: [lam2[0].rem_euclid(n) as u64, lam2[1].rem_euclid(n) as u64],
        };
        self.index.get(&c).copied()
    }

    pub fn zero_id(&self) -> usize {
        let r = self.l0.rank();
        self.find(&vec![Rat::zero(); r], [0, 0], [0, 0])
            .expect("zero class exists")
    }

    pub fn negate(&self, id: usize) -> usize {
        let c = &self.cosets[id];
        let neg0: Vec<Rat> = c.lam0.iter().map(|v| -v).collect();
        self.find(
            &neg0,
            [-(c.lam1[0] as i64), -(c.lam1[1] as i64)],
            [-(c.lam2[0] as i64), -(c.lam2[1] as i64)],
        )
        .expect("negated class exists")
    }

    /// `(lam21, lam22)` as rationals in `[0, 1)`.
    pub fn lam2(&self, id: usize) -> (Rat, Rat) {
        let c = &self.cosets[id];
        let n = self.n as i64;
        (
            Rat::new((c.lam2[0] as i64).into(), n.into()),
            Rat::new((c.lam2[1] as i64).into(), n.into()),
        )
    }

    /// `Q(lam) = Q(lam0) + lam1 . lam2` modulo 1, in `[0, 1)`.
    pub fn q_value(&self, id: usize) -> Rat {
        let c = &self.cosets[id];
        let (l21, l22) = self.lam2(id);
        frac(&(self.l0.q(&c.lam0) + int(c.lam1[0] as i64) * l21 + int(c.lam1[1] as i64) * l22))
    }

    /// Ids of classes with `lam1 = 0`.
    pub fn lam1_zero_ids(&self) -> Vec<usize> {
        (0..self.cosets.len())
            .filter(|&i| self.cosets[i].lam1 == [0, 0])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    #[test]
    fn rejects_bad_gram() {
        assert!(PosDefLattice::new(vec![vec![1]]).is_err());
        assert!(PosDefLattice::new(vec![vec![2, 3], vec![3, 2]]).is_err());
        assert!(PosDefLattice::new(vec![vec![2, 1], vec![0, 2]]).is_err());
    }

    #[test]
    fn e8_is_unimodular() {
        let e8 = PosDefLattice::e8();
        assert_eq!(e8.det(), 1);
        assert_eq!(discriminant_cosets(&e8).unwrap().len(), 1);
        assert_eq!(PosDefLattice::e8_cubed().det(), 1);
    }

    #[test]
    fn cosets_of_a1() {
        let a1 = PosDefLattice::a1_scaled(1);
        let cs = discriminant_cosets(&a1).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[1].rep, vec![rat(1, 2)]);
        assert_eq!(cs[1].q, rat(1, 4));
        let r0 = discriminant_cosets(&PosDefLattice::rank_zero()).unwrap();
        assert_eq!(r0.len(), 1);
        assert!(r0[0].rep.is_empty());
    }

    #[test]
    fn a2_has_three_cosets() {
        let cs = discriminant_cosets(&PosDefLattice::a2()).unwrap();
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().skip(1).all(|c| c.q == rat(1, 3)));
    }

    #[test]
    fn enumerate_a1_half_coset() {
        let a1 = PosDefLattice::a1_scaled(1);
        let v = a1.enumerate_by_norm(&[rat(1, 2)], &rat(1, 4));
        assert_eq!(v, vec![vec![rat(-1, 2)], vec![rat(1, 2)]]);
    }

    #[test]
    fn pairing_examples() {
        let a1 = PosDefLattice::a1_scaled(1);
        assert_eq!(a1.gram_pair(&[rat(1, 2)], &[int(1)]).unwrap(), int(1));
        assert!(a1.gram_pair(&[int(1)], &[]).is_err());
    }

    #[test]
    fn witt_cosets_with_n() {
        let w = WittLattice::new(PosDefLattice::a1_scaled(1), 2).unwrap();
        assert_eq!(w.num_cosets(), 2 * 16);
        let id = w.find(&[rat(1, 2)], [1, 0], [1, 1]).unwrap();
        assert_eq!(w.q_value(id), rat(3, 4));
        assert_eq!(w.negate(w.negate(id)), id);
        assert_eq!(w.signature(), (3, 2));
    }
}
