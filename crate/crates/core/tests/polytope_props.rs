//! Decomposition of points of T(alpha, s) into sparse vectors.

use proptest::prelude::*;
use riplab::linalg::DenseVector;
use riplab::polytope::{decompose, is_member, verify_combination, PolytopeSpec};
use riplab::Error;

/// Member of `T(alpha, s)` built from raw entries in `[-1, 1]`: entries are
/// scaled by `alpha` and the whole vector shrunk onto the l1 cap when needed.
fn member(raw: &[f64], alpha: f64, s: usize, fill: f64, on_boundary: bool) -> Vec<f64> {
    let mut v: Vec<f64> = raw.iter().map(|x| x * alpha).collect();
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    let cap = s as f64 * alpha;
    if on_boundary && l1 > 0.0 {
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let factor = (cap / l1).min(alpha / peak);
        v.iter_mut().for_each(|x| *x *= factor);
    } else if l1 > cap {
        v.iter_mut().for_each(|x| *x *= cap * fill / l1);
    }
    v
}

fn raw_vector() -> impl Strategy<Value = Vec<f64>> {
    (5usize..=20).prop_flat_map(|p| {
        prop::collection::vec(prop_oneof![3 => -1.0f64..=1.0, 1 => Just(0.0), 1 => Just(1.0), 1 => Just(-1.0)], p)
    })
}

#[test]
fn three_term_example() {
    let third = 2.0 / 3.0;
    let v = DenseVector::new(vec![third; 3]).unwrap();
    let spec = PolytopeSpec::new(1.0, 2).unwrap();
    let comb = decompose(&v, &spec).unwrap();
    assert!(verify_combination(&v, &spec, &comb));
    assert_eq!(comb.len(), 3);
    let mut vectors: Vec<Vec<f64>> = comb.vectors().to_vec();
    vectors.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let expected = [[1.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]];
    for (u, e) in vectors.iter().zip(expected) {
        assert!(u.iter().zip(e).all(|(a, b)| (a - b).abs() < 1e-12), "{u:?}");
    }
    assert!(comb.weights().iter().all(|w| (w - 1.0 / 3.0).abs() < 1e-12));
}

#[test]
fn already_sparse_is_returned_whole() {
    let v = DenseVector::new(vec![0.0, 0.7, 0.0, -0.2]).unwrap();
    let spec = PolytopeSpec::new(1.0, 2).unwrap();
    let comb = decompose(&v, &spec).unwrap();
    assert_eq!(comb.len(), 1);
    assert_eq!(comb.vectors()[0], v.as_slice());
}

#[test]
fn non_members_are_rejected() {
    let spec = PolytopeSpec::new(1.0, 2).unwrap();
    let too_tall = DenseVector::new(vec![1.01, 0.0, 0.0]).unwrap();
    let too_wide = DenseVector::new(vec![0.9, 0.9, 0.9]).unwrap();
    for v in [too_tall, too_wide] {
        assert!(!is_member(&v, &spec));
        assert!(matches!(decompose(&v, &spec), Err(Error::NotMember { .. })));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn members_decompose_and_verify(
        raw in raw_vector(),
        s in 1usize..=6,
        alpha in 0.1f64..10.0,
        fill in 0.3f64..1.0,
        on_boundary in any::<bool>(),
    ) {
        let v = member(&raw, alpha, s, fill, on_boundary);
        let spec = PolytopeSpec::new(alpha, s).unwrap();
        prop_assert!(is_member(&v, &spec));
        let comb = decompose(&DenseVector::new(v.clone()).unwrap(), &spec).unwrap();
        prop_assert!(verify_combination(&v, &spec, &comb));
        let back = comb.combine();
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
        prop_assert!(back.iter().zip(&v).all(|(a, b)| (a - b).abs() <= 1e-10 * scale));
    }

    #[test]
    fn sign_flips_carry_through(raw in raw_vector(), s in 1usize..=5, flips in prop::collection::vec(any::<bool>(), 20)) {
        let v = member(&raw, 1.0, s, 0.9, false);
        let spec = PolytopeSpec::new(1.0, s).unwrap();
        let sign = |i: usize| if flips[i] { -1.0 } else { 1.0 };
        let w: Vec<f64> = v.iter().enumerate().map(|(i, x)| sign(i) * x).collect();
        let a = decompose(&DenseVector::new(v).unwrap(), &spec).unwrap();
        let b = decompose(&DenseVector::new(w).unwrap(), &spec).unwrap();
        prop_assert_eq!(a.weights(), b.weights());
        for (u, x) in a.vectors().iter().zip(b.vectors()) {
            prop_assert!(u.iter().enumerate().all(|(i, ui)| sign(i) * ui == x[i]));
        }
    }

    #[test]
    fn convex_combinations_of_sparse_vectors_are_members(
        p in 5usize..=20,
        s in 1usize..=6,
        seeds in prop::collection::vec((0u64..u64::MAX, 0.01f64..1.0), 1..8),
    ) {
        use rand::{Rng, SeedableRng};
        let alpha = 1.0;
        let s = s.min(p);
        let weight_sum: f64 = seeds.iter().map(|x| x.1).sum();
        let mut v = vec![0.0; p];
        for &(seed, w) in &seeds {
            // s-sparse, ||u||_inf <= 1 and ||u||_1 = s / 2 fixed across terms
            let mut g = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let support = rand::seq::index::sample(&mut g, p, s).into_vec();
            let mut u = vec![0.0f64; p];
            for &i in &support {
                u[i] = g.random_range(0.1..1.0) * if g.random::<bool>() { 1.0 } else { -1.0 };
            }
            let l1: f64 = u.iter().map(|x| x.abs()).sum();
            let scale = (s as f64 / 2.0) / l1;
            prop_assume!(u.iter().all(|x| (x * scale).abs() <= alpha));
            for i in 0..p {
                v[i] += w / weight_sum * u[i] * scale;
            }
        }
        prop_assert!(is_member(&v, &PolytopeSpec::new(alpha, s).unwrap()));
    }

    #[test]
    fn outside_points_never_decompose(raw in raw_vector(), s in 1usize..=6, excess in 1e-6f64..0.5) {
        let v: Vec<f64> = member(&raw, 1.0, s, 1.0, true);
        prop_assume!(v.iter().any(|x| *x != 0.0));
        let spec = PolytopeSpec::new(1.0, s).unwrap();
        let pushed: Vec<f64> = v.iter().map(|x| x * (1.0 + excess)).collect();
        prop_assert!(!is_member(&pushed, &spec));
        prop_assert!(decompose(&DenseVector::new(pushed).unwrap(), &spec).is_err());
    }
}
