use borcherds_core::exactmath::rational::to_f64;
use borcherds_core::exactmath::{int, rat, Rat};
use borcherds_core::lattice::{discriminant_cosets, PosDefLattice, WittLattice};
use num_traits::Zero;
use proptest::prelude::*;
use std::collections::BTreeSet;

/// Number of E8 vectors of norm `2n` in the even coordinate model
/// `D8 + (1/2, ..., 1/2)`: integer or all-half-integer vectors with even
/// coordinate sum.
fn e8_coordinate_count(n: i64, box_: i64) -> usize {
    let mut count = 0;
    let side = (2 * box_ + 1) as usize;
    for half in [false, true] {
        let mut idx = [0usize; 8];
        loop {
            // doubled coordinates
            let v: Vec<i64> = idx
                .iter()
                .map(|&i| {
                    let c = i as i64 - box_;
                    if half { 2 * c + 1 } else { 2 * c }
                })
                .collect();
            let sum2: i64 = v.iter().sum();
            let norm4: i64 = v.iter().map(|x| x * x).sum();
            if sum2 % 4 == 0 && norm4 == 8 * n {
                count += 1;
            }
            let mut k = 0;
            while k < 8 {
                idx[k] += 1;
                if idx[k] < side {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == 8 {
                break;
            }
        }
    }
    count
}

fn count_by_norm(l: &PosDefLattice, bound: i64) -> Vec<usize> {
    let zero = vec![Rat::zero(); l.rank()];
    let mut counts = vec![0usize; bound as usize + 1];
    for x in l.enumerate_by_norm(&zero, &int(bound)) {
        let q = l.q(&x);
        assert!(q.is_integer());
        counts[q.to_integer().try_into().unwrap_or(0usize)] += 1;
    }
    counts
}

#[test]
fn e8_shells_match_coordinate_model() {
    let counts = count_by_norm(&PosDefLattice::e8(), 2);
    assert_eq!(counts[0], 1);
    assert_eq!(counts[1], e8_coordinate_count(1, 1));
    assert_eq!(counts[2], e8_coordinate_count(2, 2));
    assert_eq!(counts[1], 240);
    assert_eq!(counts[2], 2160);
}

#[test]
fn e8_cubed_has_720_roots() {
    let l = PosDefLattice::e8_cubed();
    assert_eq!(l.rank(), 24);
    assert!(l.is_unimodular());
    assert_eq!(count_by_norm(&l, 1), vec![1, 720]);
}

#[test]
fn discriminant_forms() {
    let a1 = PosDefLattice::a1_scaled(1);
    let c = discriminant_cosets(&a1).unwrap();
    assert_eq!(c.len(), 2);
    assert_eq!(c[1].q, rat(1, 4));
    let a2 = discriminant_cosets(&PosDefLattice::a2()).unwrap();
    assert_eq!(a2.len(), 3);
    let qs: BTreeSet<Rat> = a2.iter().map(|c| c.q.clone()).collect();
    assert_eq!(qs, [int(0), rat(1, 3)].into_iter().collect());
    assert_eq!(discriminant_cosets(&PosDefLattice::e8()).unwrap().len(), 1);
}

#[test]
fn witt_cosets_and_negation() {
    for n in 1..=3u64 {
        let w = WittLattice::new(PosDefLattice::a1_scaled(1), n).unwrap();
        assert_eq!(w.num_cosets() as u64, 2 * n.pow(4));
        assert_eq!(w.dimension(), 5);
        for id in 0..w.num_cosets() {
            assert_eq!(w.negate(w.negate(id)), id);
            assert_eq!(w.q_value(w.negate(id)), w.q_value(id));
        }
        let zero = w.zero_id();
        assert_eq!(w.negate(zero), zero);
        assert_eq!(w.lam1_zero_ids().len() as u64, 2 * n * n);
    }
}

#[test]
fn rejects_bad_gram() {
    assert!(PosDefLattice::new(vec![vec![1]]).is_err());
    assert!(PosDefLattice::new(vec![vec![2, 3], vec![3, 2]]).is_err());
    assert!(PosDefLattice::new(vec![vec![2, 1], vec![0, 2]]).is_err());
}

fn brute_force(g: &[Vec<i64>], lam0: &[Rat], bound: &Rat) -> BTreeSet<Vec<Rat>> {
    let l = PosDefLattice::new(g.to_vec()).unwrap();
    let n = g.len();
    let b = bound.to_integer().try_into().unwrap_or(0i64);
    // |x_i| <= sqrt(2 B (G^{-1})_ii) for Q(x) <= B
    let radius: Vec<i64> = (0..n)
        .map(|i| {
            let gi = l.gram_inverse()[i][i].clone();
            let f = (2.0 * b as f64 * to_f64(&gi)).sqrt();
            f.ceil() as i64 + 2
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut idx: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        let x: Vec<Rat> = idx.iter().zip(lam0).map(|(&i, l)| int(i) + l).collect();
        if &l.q(&x) <= bound {
            out.insert(x);
        }
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] <= radius[k] {
                break;
            }
            idx[k] = -radius[k];
            k += 1;
        }
        if k == n {
            break;
        }
    }
    out
}

fn even_gram() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(-2i64..=2, n * n).prop_filter_map("singular", move |a| {
            // G = 2 A^T A + 2 I is even and positive definite.
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    g[i][j] = 2 * (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum::<i64>();
                }
                g[i][i] += 2;
            }
            Some(g)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn enumeration_matches_brute_force(g in even_gram(), bound in 0i64..4, shift in 0usize..8) {
        let l = PosDefLattice::new(g.clone()).unwrap();
        let cosets = discriminant_cosets(&l).unwrap();
        let lam0 = cosets[shift % cosets.len()].rep.clone();
        let got: BTreeSet<Vec<Rat>> = l.enumerate_by_norm(&lam0, &int(bound)).into_iter().collect();
        prop_assert_eq!(got, brute_force(&g, &lam0, &int(bound)));
    }

    #[test]
    fn coset_count_is_determinant(g in even_gram()) {
        let l = PosDefLattice::new(g).unwrap();
        prop_assert_eq!(discriminant_cosets(&l).unwrap().len() as i64, l.det());
    }

    #[test]
    fn coset_norms_are_well_defined(g in even_gram(), v in prop::collection::vec(-3i64..=3, 3)) {
        let l = PosDefLattice::new(g).unwrap();
        for c in discriminant_cosets(&l).unwrap() {
            let x: Vec<Rat> = c.rep.iter().zip(&v).map(|(r, &s)| r + int(s)).collect();
            let d = l.q(&x) - &c.q;
            prop_assert!(d.is_integer());
        }
    }
}
