//! Restricted isometry, orthogonality and null-space checks against an
//! independent nalgebra brute force.

use itertools::Itertools;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand_distr::{Distribution, StandardNormal};
use riplab::experiment::{sample_ensemble, Ensemble};
use riplab::linalg::{DenseMatrix, LinearMap};
use riplab::ric::{nsp_report, ric_exact, ric_sampled, ric_upscale_bound, roc_exact, RicMethod};
use riplab::{rng, Error};

fn to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

fn brute_ric(a: &DenseMatrix, s: usize) -> f64 {
    let m = to_na(a);
    (0..a.cols())
        .combinations(s)
        .map(|support| {
            let sub = m.select_columns(support.iter());
            let eig = SymmetricEigen::new(sub.transpose() * &sub).eigenvalues;
            eig.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn brute_roc(a: &DenseMatrix, k1: usize, k2: usize) -> f64 {
    let m = to_na(a);
    let mut best: f64 = 0.0;
    for s1 in (0..a.cols()).combinations(k1) {
        let rest: Vec<usize> = (0..a.cols()).filter(|j| !s1.contains(j)).collect();
        for s2 in rest.into_iter().combinations(k2) {
            let block = m.select_columns(s1.iter()).transpose() * m.select_columns(s2.iter());
            best = best.max(block.singular_values().max());
        }
    }
    best
}

fn gaussian(n: usize, p: usize, seed: u64) -> DenseMatrix {
    sample_ensemble(Ensemble::Gaussian, n, p, &mut rng::seeded(seed))
}

#[test]
fn exact_ric_matches_brute_force() {
    for seed in 0..20u64 {
        let n = 4 + (seed as usize % 6);
        let p = n + 2 + (seed as usize % 4);
        let a = gaussian(n, p, seed);
        for s in 1..=3 {
            let report = ric_exact(&a, s as f64).unwrap();
            assert_eq!(report.method, RicMethod::ExactEnumeration);
            let oracle = brute_ric(&a, s);
            assert!((report.value - oracle).abs() <= 1e-9, "seed {seed} s {s}: {} vs {oracle}", report.value);
        }
    }
}

#[test]
fn exact_roc_matches_brute_force() {
    for seed in 0..8u64 {
        let a = gaussian(5, 8, 100 + seed);
        for (k1, k2) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            let v = roc_exact(&a, k1, k2).unwrap();
            let oracle = brute_roc(&a, k1, k2);
            assert!((v - oracle).abs() <= 1e-9, "{k1},{k2}: {v} vs {oracle}");
        }
    }
}

#[test]
fn scaled_identity_and_orthonormal_columns() {
    let c = 1.3;
    let a = DenseMatrix::identity(6).scaled(c);
    assert!((ric_exact(&a, 3.0).unwrap().value - (c * c - 1.0).abs()).abs() < 1e-14);
    assert_eq!(roc_exact(&DenseMatrix::identity(6), 2, 3).unwrap(), 0.0);
    let q = riplab::linalg::svd(&gaussian(6, 6, 3)).unwrap().u;
    assert!(ric_exact(&q, 4.0).unwrap().value < 1e-12);
}

#[test]
fn fractional_order_rounds_up() {
    let a = gaussian(6, 9, 4);
    assert_eq!(ric_exact(&a, 1.5).unwrap().value, ric_exact(&a, 2.0).unwrap().value);
    assert_eq!(ric_exact(&a, 2.0 + 1e-12).unwrap().effective_order, 2);
}

#[test]
fn enumeration_budget_is_enforced() {
    let a = gaussian(30, 40, 5);
    assert!(matches!(ric_exact(&a, 10.0), Err(Error::Budget { .. })));
}

#[test]
fn upscale_lemma_holds() {
    for seed in 0..10u64 {
        let a = gaussian(8, 12, 200 + seed);
        let d1 = ric_exact(&a, 1.0).unwrap().value;
        let d2 = ric_exact(&a, 2.0).unwrap().value;
        let d4 = ric_exact(&a, 4.0).unwrap().value;
        assert!(d2 <= ric_upscale_bound(d1, 2.0).unwrap() + 1e-12);
        assert!(d4 <= ric_upscale_bound(d2, 2.0).unwrap() + 1e-12);
    }
}

#[test]
fn sampled_lower_bound_on_vector_maps_finds_the_spectrum() {
    // with shape (m, 1) every matrix has rank 1, so the rank-1 constant is
    // the largest deviation of the spectrum of M^T M from 1
    let mut g = rng::seeded(6);
    let q = 7;
    let data: Vec<f64> = (0..q * 5).map(|_| StandardNormal.sample(&mut g)).map(|x: f64| x / (q as f64).sqrt()).collect();
    let mat = DenseMatrix::new(q, 5, data).unwrap();
    let map = LinearMap::new(mat.clone(), (5, 1)).unwrap();
    let m = to_na(&mat);
    let eig = SymmetricEigen::new(m.transpose() * &m).eigenvalues;
    let exact = eig.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max);
    let sampled = ric_sampled(&map, 1, 4, 11).unwrap();
    assert_eq!(sampled.method, RicMethod::SampledLowerBound);
    assert!(sampled.value <= exact + 1e-9);
    assert!(sampled.value >= exact - 1e-6, "{} vs {exact}", sampled.value);
}

#[test]
fn sampled_is_seed_deterministic() {
    let map = LinearMap::new(gaussian(12, 9, 7), (3, 3)).unwrap();
    let a = ric_sampled(&map, 1, 6, 42).unwrap();
    let b = ric_sampled(&map, 1, 6, 42).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
}

/// Null-space basis of `a` from the eigenvectors of `A^T A`.
fn null_basis(a: &DenseMatrix) -> Vec<Vec<f64>> {
    let m = to_na(a);
    let eig = SymmetricEigen::new(m.transpose() * &m);
    (0..a.cols())
        .filter(|&i| eig.eigenvalues[i].abs() < 1e-10)
        .map(|i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect()
}

#[test]
fn nsp_margin_dominates_sampled_null_vectors() {
    for seed in 0..6u64 {
        let a = gaussian(6, 9, 300 + seed);
        let k = 1 + seed as usize % 2;
        let report = nsp_report(&a, k).unwrap();
        let basis = null_basis(&a);
        let mut g = rng::stream(seed, 1);
        for _ in 0..500 {
            let coef: Vec<f64> = basis.iter().map(|_| StandardNormal.sample(&mut g)).collect();
            let mut h = vec![0.0; a.cols()];
            for (c, v) in coef.iter().zip(&basis) {
                h.iter_mut().zip(v).for_each(|(hi, vi)| *hi += c * vi);
            }
            let l1: f64 = h.iter().map(|x| x.abs()).sum();
            let mut mags: Vec<f64> = h.iter().map(|x| x.abs() / l1).collect();
            mags.sort_by(|x, y| y.total_cmp(x));
            let top: f64 = mags[..k].iter().sum();
            assert!(2.0 * top - 1.0 <= report.worst_margin + 1e-9);
            if report.holds {
                assert!(2.0 * top - 1.0 < 0.0);
            }
        }
    }
}

#[test]
fn nsp_trivial_and_violated_cases() {
    let r = nsp_report(&gaussian(6, 4, 1), 2).unwrap();
    assert!(r.holds && r.trivial_null_space);
    // e1 - e2 spans the null space: any k = 1 support captures half its mass
    let a = DenseMatrix::from_rows(vec![vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
    let r = nsp_report(&a, 1).unwrap();
    assert!(!r.holds);
    assert!(r.worst_margin.abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ric_is_monotone_and_permutation_invariant(seed in 0u64..1000, shift in 1usize..8) {
        let a = gaussian(6, 8, seed);
        let values: Vec<f64> = (1..=4).map(|s| ric_exact(&a, s as f64).unwrap().value).collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        let perm: Vec<usize> = (0..8).map(|j| (j + shift) % 8).collect();
        let permuted = a.select_columns(&perm);
        prop_assert!((ric_exact(&permuted, 3.0).unwrap().value - values[2]).abs() < 1e-12);
    }
}
