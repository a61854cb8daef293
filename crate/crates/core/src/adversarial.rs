//! Explicit measurement matrices on which l1 minimization fails.
//!
//! High order (`t >= 4/3`): `A = sqrt(1 + sqrt((t-1)/t)) (I - beta1 beta1^T)`
//! with `beta1` proportional to `(1 x k, -k/m' x m, 0, ...)`,
//! `m' = ((t - 1) + sqrt(t (t - 1))) k` and `m` the largest integer strictly
//! below `m'`. Since `A beta1 = 0`, the planted `beta0 = (1 x k, 0, ...)`
//! and `gamma0 = (0 x k, k/m' x m, 0, ...)` have identical measurements
//! while `||gamma0||_1 = m k / m' < k = ||beta0||_1`.
//!
//! Low order (`0 < t < 4/3`): `A = 2 / sqrt(4 - t) (I - g g^T)` with
//! `g = (1 x 2k, 0, ...) / sqrt(2k)`. The `k`-sparse vectors
//! `beta0 = (1 x k, 0, ...)` and `beta0' = (0 x k, -1 x k, 0, ...)` differ
//! by a multiple of `g`, so they share measurements and l1 norm and no
//! decoder can tell them apart.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, DenseMatrix, DenseVector, Norm};
use crate::problem::{ConstraintSet, RecoveryProblem};
use crate::ric::effective_order;
use crate::solvers::{l1_min, SolverOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    High,
    Low,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdversarialInstance {
    pub regime: Regime,
    pub matrix: DenseMatrix,
    /// Planted `k`-sparse signal.
    pub beta0: DenseVector,
    /// Competing point with the same measurements.
    pub gamma0: DenseVector,
    /// Null vector of `matrix` (`beta1` or `g`).
    pub null_witness: DenseVector,
    pub t: f64,
    pub k: usize,
    /// Support size of `gamma0`.
    pub m: usize,
    /// `m'` for the high-order regime; equal to `k` for the low-order one.
    pub m_prime: f64,
    /// Analytic bound on `delta_{tk}(matrix)`; exact for the low-order regime.
    pub delta_bound: f64,
    /// `||gamma0||_1 < ||beta0||_1` (high order); `false` marks the
    /// low-order tie `||gamma0||_1 = ||beta0||_1`.
    pub strict: bool,
}

/// Largest integer strictly below `x > 0`; values within `1e-9` of an
/// integer count as that integer.
fn strictly_below(x: f64) -> usize {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        (nearest as usize).saturating_sub(1)
    } else {
        x.floor() as usize
    }
}

/// `c (I - w w^T)` for a unit vector `w`.
fn scaled_deflation(c: f64, w: &[f64]) -> DenseMatrix {
    let p = w.len();
    let mut a = DenseMatrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            let id = if i == j { 1.0 } else { 0.0 };
            a[(i, j)] = c * (id - w[i] * w[j]);
        }
    }
    a
}

pub fn hard_instance_high_t(t: f64, k: usize, p: usize) -> Result<AdversarialInstance> {
    if !(t.is_finite() && t >= 4.0 / 3.0) {
        return Err(Error::Domain(format!("high-order construction needs t >= 4/3, got {t}")));
    }
    if k == 0 {
        return Err(Error::Range("k must be at least 1".into()));
    }
    let tk = effective_order(t * k as f64)?;
    if p < 2 * tk {
        return Err(Error::Range(format!("p = {p} is below 2 * ceil(t k) = {}", 2 * tk)));
    }
    let kf = k as f64;
    let m_prime = ((t - 1.0) + (t * (t - 1.0)).sqrt()) * kf;
    let m = strictly_below(m_prime);
    if k + m > p {
        return Err(Error::Range(format!("p = {p} cannot hold k + m = {}", k + m)));
    }
    let ratio = kf / m_prime;
    let scale = (kf + m as f64 * ratio * ratio).sqrt();
    let mut beta1 = vec![0.0; p];
    let mut beta0 = vec![0.0; p];
    let mut gamma0 = vec![0.0; p];
    for i in 0..k {
        beta1[i] = 1.0 / scale;
        beta0[i] = 1.0;
    }
    for i in k..k + m {
        beta1[i] = -ratio / scale;
        gamma0[i] = ratio;
    }
    let thr = (1.0 - 1.0 / t).sqrt();
    let matrix = scaled_deflation((1.0 + thr).sqrt(), &beta1);
    Ok(AdversarialInstance {
        regime: Regime::High,
        matrix,
        beta0: DenseVector::from_vec_unchecked(beta0),
        gamma0: DenseVector::from_vec_unchecked(gamma0),
        null_witness: DenseVector::from_vec_unchecked(beta1),
        t,
        k,
        m,
        m_prime,
        delta_bound: thr + (1.0 + thr) * 5.0 / (2.0 * kf),
        strict: true,
    })
}

pub fn hard_instance_low_t(t: f64, k: usize, p: usize) -> Result<AdversarialInstance> {
    if !(t > 0.0 && t < 4.0 / 3.0) {
        return Err(Error::Domain(format!("low-order construction needs 0 < t < 4/3, got {t}")));
    }
    if k == 0 {
        return Err(Error::Range("k must be at least 1".into()));
    }
    if p < 2 * k {
        return Err(Error::Range(format!("p = {p} is below 2k = {}", 2 * k)));
    }
    let g_entry = 1.0 / ((2 * k) as f64).sqrt();
    let mut g = vec![0.0; p];
    let mut beta0 = vec![0.0; p];
    let mut beta0_prime = vec![0.0; p];
    g[..2 * k].fill(g_entry);
    for i in 0..k {
        beta0[i] = 1.0;
        beta0_prime[k + i] = -1.0;
    }
    let c_sq = 4.0 / (4.0 - t);
    let matrix = scaled_deflation(c_sq.sqrt(), &g);

    // Gram of A on a support S is c^2 (I - g_S g_S^T): eigenvalue c^2 with
    // multiplicity |S| - 1 and c^2 (1 - j / 2k) once, j = |S n [2k]|; the
    // deviation is linear in j, so its extremes sit at the ends of the range
    let order = effective_order(t * k as f64)?.min(p);
    let dev = |j: usize| (1.0 - c_sq * (1.0 - j as f64 / (2 * k) as f64)).abs();
    let (j_min, j_max) = (order.saturating_sub(p - 2 * k), order.min(2 * k));
    let mut delta_bound = dev(j_min).max(dev(j_max));
    if order >= 2 {
        delta_bound = delta_bound.max(c_sq - 1.0);
    }

    Ok(AdversarialInstance {
        regime: Regime::Low,
        matrix,
        beta0: DenseVector::from_vec_unchecked(beta0),
        gamma0: DenseVector::from_vec_unchecked(beta0_prime),
        null_witness: DenseVector::from_vec_unchecked(g),
        t,
        k,
        m: k,
        m_prime: k as f64,
        delta_bound,
        strict: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureReport {
    pub l1_objective_at_optimum: f64,
    pub planted_objective: f64,
    /// `||estimate - beta0||_2 <= 1e-6`.
    pub recovered_planted: bool,
    pub competing_objective: f64,
    /// `||A gamma0 - A beta0||_2`, relative to `||A beta0||_2`.
    pub competing_residual: f64,
    pub solver_converged: bool,
    pub estimate: DenseVector,
}

pub const RECOVERY_TOL: f64 = 1e-6;

/// Solves `min ||b||_1 s.t. A b = A beta0` and reports how the optimum
/// compares with the planted and competing points.
pub fn verify_failure(inst: &AdversarialInstance, opts: &SolverOptions) -> Result<FailureReport> {
    let y = inst.matrix.matvec(&inst.beta0);
    let problem = RecoveryProblem::new(inst.matrix.clone(), DenseVector::new(y.clone())?, ConstraintSet::Zero)?;
    let result = l1_min(&problem, opts)?;
    let err: Vec<f64> = result.estimate.iter().zip(inst.beta0.iter()).map(|(a, b)| a - b).collect();
    let ag = inst.matrix.matvec(&inst.gamma0);
    let diff: Vec<f64> = ag.iter().zip(&y).map(|(a, b)| a - b).collect();
    Ok(FailureReport {
        l1_objective_at_optimum: result.objective,
        planted_objective: inst.beta0.norm(Norm::L1),
        recovered_planted: norm(&err, Norm::L2) <= RECOVERY_TOL,
        competing_objective: inst.gamma0.norm(Norm::L1),
        competing_residual: norm(&diff, Norm::L2) / norm(&y, Norm::L2).max(f64::MIN_POSITIVE),
        solver_converged: result.converged,
        estimate: result.estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(v: &[f64]) -> f64 {
        norm(v, Norm::Linf)
    }

    #[test]
    fn high_t_example_numbers() {
        let inst = hard_instance_high_t(2.0, 2, 8).unwrap();
        assert!((inst.m_prime - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-14);
        assert_eq!(inst.m, 4);
        assert!((inst.gamma0.norm(Norm::L1) - 8.0 / inst.m_prime).abs() < 1e-14);
        assert!(inst.gamma0.norm(Norm::L1) < 2.0);
        assert!(max_abs(&inst.matrix.matvec(&inst.null_witness)) < 1e-12);
        let diff: Vec<f64> =
            inst.matrix.matvec(&inst.beta0).iter().zip(inst.matrix.matvec(&inst.gamma0)).map(|(a, b)| a - b).collect();
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn integral_m_prime_steps_down() {
        let inst = hard_instance_high_t(4.0 / 3.0, 3, 8).unwrap();
        assert!((inst.m_prime - 3.0).abs() < 1e-12);
        assert_eq!(inst.m, 2);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(hard_instance_high_t(2.0, 2, 7), Err(Error::Range(_))));
        assert!(matches!(hard_instance_high_t(1.2, 2, 8), Err(Error::Domain(_))));
        assert!(matches!(hard_instance_low_t(1.0, 3, 5), Err(Error::Range(_))));
        assert!(matches!(hard_instance_low_t(1.5, 3, 8), Err(Error::Domain(_))));
    }

    #[test]
    fn low_t_tie() {
        let inst = hard_instance_low_t(1.0, 3, 8).unwrap();
        assert_eq!(inst.beta0.norm(Norm::L1), 3.0);
        assert_eq!(inst.gamma0.norm(Norm::L1), 3.0);
        assert!(!inst.strict);
        assert!((inst.delta_bound - 1.0 / 3.0).abs() < 1e-15);
        let diff: Vec<f64> =
            inst.matrix.matvec(&inst.beta0).iter().zip(inst.matrix.matvec(&inst.gamma0)).map(|(a, b)| a - b).collect();
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn high_t_failure_is_observed() {
        let inst = hard_instance_high_t(2.0, 2, 8).unwrap();
        let rep = verify_failure(&inst, &SolverOptions::default()).unwrap();
        assert!(rep.solver_converged);
        assert!(!rep.recovered_planted);
        assert!(rep.l1_objective_at_optimum <= rep.competing_objective + 1e-9);
        assert!(rep.competing_objective < rep.planted_objective);
    }
}
