//! Seeded random ensembles, phase-diagram sweeps and threshold curves.
//!
//! Every random draw comes from [`crate::rng::stream`]; a sweep cell with
//! index `c` uses stream `c`, so results do not depend on how cells are
//! scheduled across threads.

use rand::seq::index::sample;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, DenseMatrix, DenseVector, LinearMap, Norm};
use crate::problem::{ConstraintSet, RecoveryProblem};
use crate::ric::{delta_star, n_star, ThresholdStatus};
use crate::rng::{self, Rng};
use crate::solvers::{l1_min, SolverOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    Gaussian,
    Rademacher,
    /// `+-sqrt(3/n)` with probability 1/6 each, `0` with probability 2/3.
    TernarySparse,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ensemble: Ensemble,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub success_threshold: f64,
}

pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 1e-4;

impl ExperimentConfig {
    pub fn new(ensemble: Ensemble, n: usize, p: usize, k: usize, trials: usize, seed: u64) -> Result<Self> {
        let config = Self { ensemble, n, p, k, trials, seed, success_threshold: DEFAULT_SUCCESS_THRESHOLD };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::Domain(format!("dimensions must be positive, got n = {}, p = {}", self.n, self.p)));
        }
        if self.k > self.p {
            return Err(Error::Domain(format!("k = {} exceeds p = {}", self.k, self.p)));
        }
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if !(self.success_threshold > 0.0 && self.success_threshold.is_finite()) {
            return Err(Error::Domain(format!("success_threshold must be positive, got {}", self.success_threshold)));
        }
        Ok(())
    }
}

/// `n x p` matrix with i.i.d. entries of variance `1/n` from `ensemble`.
pub fn sample_ensemble(ensemble: Ensemble, n: usize, p: usize, rng: &mut Rng) -> DenseMatrix {
    let nf = n as f64;
    let data: Vec<f64> = (0..n * p)
        .map(|_| match ensemble {
            Ensemble::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                z / nf.sqrt()
            }
            Ensemble::Rademacher => {
                if rng.random::<bool>() {
                    1.0 / nf.sqrt()
                } else {
                    -1.0 / nf.sqrt()
                }
            }
            Ensemble::TernarySparse => match rng.random_range(0..6u8) {
                0 => (3.0 / nf).sqrt(),
                1 => -(3.0 / nf).sqrt(),
                _ => 0.0,
            },
        })
        .collect();
    DenseMatrix::new(n, p, data).expect("ensemble entries are finite")
}

/// Measurement matrix for `config`, drawn from `seeded(config.seed)`.
pub fn make_ensemble(config: &ExperimentConfig) -> Result<DenseMatrix> {
    config.validate()?;
    Ok(sample_ensemble(config.ensemble, config.n, config.p, &mut rng::seeded(config.seed)))
}

/// Gaussian map from `m x n` matrices to `R^q`, entries `N(0, 1/q)`.
pub fn gaussian_map(q: usize, shape: (usize, usize), rng: &mut Rng) -> Result<LinearMap> {
    let (m, n) = shape;
    if q == 0 || m == 0 || n == 0 {
        return Err(Error::Domain(format!("dimensions must be positive, got q = {q}, shape = {m}x{n}")));
    }
    LinearMap::new(sample_ensemble(Ensemble::Gaussian, q, m * n, rng), shape)
}

/// `k`-sparse vector of length `p` with uniformly random support and
/// standard Gaussian coefficients.
pub fn planted_sparse(p: usize, k: usize, rng: &mut Rng) -> Vec<f64> {
    let mut beta = vec![0.0; p];
    let mut support = sample(rng, p, k.min(p)).into_vec();
    support.sort_unstable();
    for i in support {
        beta[i] = StandardNormal.sample(rng);
    }
    beta
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_error: f64,
    /// Trials whose solver returned an error; they count as failures.
    pub solver_errors: usize,
    pub first_error: Option<String>,
}

/// Relative l2 error, or the absolute error when the truth is zero.
pub fn relative_error(estimate: &[f64], truth: &[f64]) -> f64 {
    let diff: Vec<f64> = estimate.iter().zip(truth).map(|(a, b)| a - b).collect();
    let scale = norm(truth, Norm::L2);
    let err = norm(&diff, Norm::L2);
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

fn run_cell(base: &ExperimentConfig, n: usize, k: usize, index: u64, opts: &SolverOptions) -> PhaseCell {
    let mut rng = rng::stream(base.seed, index);
    let mut successes = 0;
    let mut error_sum = 0.0;
    let mut solver_errors = 0;
    let mut first_error = None;
    for _ in 0..base.trials {
        let a = sample_ensemble(base.ensemble, n, base.p, &mut rng);
        let beta = planted_sparse(base.p, k, &mut rng);
        let y = a.matvec(&beta);
        let outcome = DenseVector::new(y)
            .and_then(|y| RecoveryProblem::new(a, y, ConstraintSet::Zero))
            .and_then(|problem| l1_min(&problem, opts));
        match outcome {
            Ok(result) => {
                let err = relative_error(&result.estimate, &beta);
                error_sum += err;
                if err <= base.success_threshold {
                    successes += 1;
                }
            }
            Err(e) => {
                solver_errors += 1;
                error_sum += 1.0;
                first_error.get_or_insert_with(|| e.to_string());
            }
        }
    }
    PhaseCell {
        n,
        k,
        trials: base.trials,
        successes,
        success_rate: successes as f64 / base.trials as f64,
        mean_error: error_sum / base.trials as f64,
        solver_errors,
        first_error,
    }
}

/// Noiseless basis-pursuit success rates over the `(n, k)` grid, in
/// row-major order (`ns` outer, `ks` inner). Cells run in parallel.
pub fn phase_sweep(base: &ExperimentConfig, ns: &[usize], ks: &[usize], opts: &SolverOptions) -> Result<Vec<PhaseCell>> {
    base.validate()?;
    opts.validate()?;
    if ns.is_empty() || ks.is_empty() {
        return Err(Error::Domain("phase grid must be nonempty".into()));
    }
    if let Some(&n) = ns.iter().find(|&&n| n == 0) {
        return Err(Error::Domain(format!("n must be positive, got {n}")));
    }
    if let Some(&k) = ks.iter().find(|&&k| k > base.p) {
        return Err(Error::Domain(format!("k = {k} exceeds p = {}", base.p)));
    }
    let grid: Vec<(usize, usize)> = ns.iter().flat_map(|&n| ks.iter().map(move |&k| (n, k))).collect();
    Ok(grid
        .par_iter()
        .enumerate()
        .map(|(index, &(n, k))| run_cell(base, n, k, index as u64, opts))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub t: f64,
    pub delta_star: f64,
    pub status: ThresholdStatus,
    /// `None` where `n_star` is undefined.
    pub n_star: Option<f64>,
}

/// `delta_star` and `n_star` on `t_min, t_min + step, ...` up to `t_max`.
/// Grid points are computed as `t_min + i * step` to avoid drift.
pub fn thresholds_emit(t_min: f64, t_max: f64, step: f64) -> Result<Vec<ThresholdRow>> {
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
        return Err(Error::Domain(format!("need 0 < t_min < t_max, got [{t_min}, {t_max}]")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let count = ((t_max - t_min) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|i| {
            let t = t_min + i as f64 * step;
            let (delta, status) = delta_star(t)?;
            Ok(ThresholdRow { t, delta_star: delta, status, n_star: n_star(t).ok() })
        })
        .collect()
}

pub fn thresholds_csv(rows: &[ThresholdRow]) -> String {
    let mut out = String::from("t,delta_star,status,n_star\n");
    for r in rows {
        let n = r.n_star.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{}\n", r.t, r.delta_star, r.status, n));
    }
    out
}

pub fn phase_csv(cells: &[PhaseCell]) -> String {
    let mut out = String::from("n,k,trials,successes,success_rate,mean_error,solver_errors\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.n, c.k, c.trials, c.successes, c.success_rate, c.mean_error, c.solver_errors
        ));
    }
    out
}
