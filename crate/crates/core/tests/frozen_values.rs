//! Reference values computed at 40 digits by `oracles/extended_precision.py`
//! and frozen here.

use approx::assert_relative_eq;
use riplab::bounds::{error_bound_l2, error_bound_matrix, gaussian_bound, oracle_bound, BoundInputs, BoundKind};
use riplab::ric::{delta_star, n_star, ric_probability_bound, ThresholdStatus};
use riplab::solvers::gaussian_radii;
use riplab::Error;

fn inputs(delta: f64, t: f64, k: usize, eps: f64, eta: f64, tail: f64) -> BoundInputs {
    BoundInputs { delta, t, eps, eta, tail_l1: tail, k_or_r: k, sigma: 1.0, n: 100, p: 256 }
}

#[test]
fn n_star_reference_points() {
    assert_relative_eq!(n_star(1.85).unwrap(), 83.2285980609870875, max_relative = 1e-14);
    assert_relative_eq!(n_star(2.0).unwrap(), 83.7370002338608382, max_relative = 1e-14);
    assert_relative_eq!(n_star(1.0).unwrap(), 162.0, max_relative = 1e-14);
}

#[test]
fn n_star_branches_agree_at_four_thirds() {
    let t = 4.0 / 3.0;
    assert_relative_eq!(n_star(t).unwrap(), 102.4, max_relative = 1e-13);
    assert_relative_eq!(n_star(t - 1e-12).unwrap(), 102.4, max_relative = 1e-9);
}

#[test]
fn n_star_grid_minimum() {
    let (arg, val) = (0..=200)
        .map(|i| 1.4 + i as f64 * 0.005)
        .map(|t| (t, n_star(t).unwrap()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((arg - 1.855).abs() < 1e-9, "{arg}");
    assert_relative_eq!(val, 83.228227718296097168, max_relative = 1e-13);
}

#[test]
fn delta_star_statuses() {
    assert_eq!(delta_star(1.0).unwrap(), (1.0 / 3.0, ThresholdStatus::Sharp));
    assert_eq!(delta_star(4.0 / 3.0).unwrap(), (0.5, ThresholdStatus::Sharp));
    assert_eq!(delta_star(0.5).unwrap().1, ThresholdStatus::Conjectured);
    assert!((delta_star(2.0).unwrap().0 - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn probability_bound_reference_points() {
    assert_relative_eq!(ric_probability_bound(10_000, 1000, 50, 0.5).unwrap(), -3.381078819423548064e99, max_relative = 1e-12);
    assert_eq!(ric_probability_bound(100_000, 1000, 50, 0.5).unwrap(), 1.0);
}

#[test]
fn radii_reference_points() {
    let (l2, ds) = gaussian_radii(1.0, 100, 256).unwrap();
    assert_relative_eq!(l2, 11.954886888874647349, max_relative = 1e-14);
    assert_relative_eq!(ds, 4.709640090061898764, max_relative = 1e-14);
}

#[test]
fn vector_bound_reference_points() {
    assert_relative_eq!(error_bound_l2(&inputs(0.5, 2.0, 4, 0.1, 0.1, 0.0)).unwrap(), 1.1827182715841865371, max_relative = 1e-14);
    let matrix = inputs(0.3, 4.0 / 3.0, 2, 0.05, 0.05, 0.1);
    assert_relative_eq!(error_bound_matrix(&matrix, BoundKind::L2).unwrap(), 0.91953424365223698750, max_relative = 1e-13);
    assert_relative_eq!(error_bound_matrix(&matrix, BoundKind::Ds).unwrap(), 1.0937716254269352694, max_relative = 1e-13);
}

#[test]
fn oracle_and_gaussian_reference_points() {
    assert_relative_eq!(
        oracle_bound(2.0, 0.5, 100, 1.0, &[10.0, 10.0, 0.1, 0.0]).unwrap(),
        55245.011599802114264,
        max_relative = 1e-14
    );
    let i = BoundInputs { n: 100, p: 55, ..inputs(0.0, 2.0, 2, 0.0, 0.0, 0.0) };
    assert_relative_eq!(gaussian_bound(&i, BoundKind::Ds).unwrap().1, 0.71816343489596431888, max_relative = 1e-14);
    // log 55 sits just above 4, where the probability would be 1 - 1/sqrt(4 pi)
    assert!(gaussian_bound(&i, BoundKind::Ds).unwrap().1 > 0.71790520822612185653);
}

#[test]
fn guarantee_void_at_threshold() {
    let thr = 0.5f64.sqrt();
    let err = error_bound_l2(&inputs(thr, 2.0, 4, 0.1, 0.1, 0.0)).unwrap_err();
    assert!(matches!(err, Error::GuaranteeVoid { .. }));
}
