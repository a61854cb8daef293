//! Convex recovery: l1 minimization for sparse vectors and nuclear-norm
//! minimization for low-rank matrices, each under an equality, l2-ball, or
//! Dantzig-ball constraint on the residual.

mod l1;
pub mod lp;
mod nuclear;
pub mod splitting;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

pub use l1::l1_min;
pub use nuclear::nuclear_min;
pub use splitting::{singular_value_threshold, soft_threshold};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Absolute tolerance on the constraint residual and optimality gap.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tolerance: 1e-8, max_iterations: 20_000, seed: 0 }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Domain("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub estimate: DenseVector,
    /// `||estimate||_1`.
    pub objective: f64,
    /// Amount by which the estimate violates its constraint: `||A b - y||_2`
    /// for equality, and the excess over the radius for the two balls.
    pub constraint_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Duality gap (LP paths, and the l2 ball when a dual point is
    /// available), otherwise the fixed-point residual.
    pub optimality_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecoveryResult {
    pub estimate: DenseMatrix,
    /// Sum of singular values of `estimate`.
    pub nuclear_objective: f64,
    pub constraint_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Relative fixed-point residual of the splitting iteration.
    pub fixed_point_residual: f64,
}

/// Constraint radii under which Gaussian noise `N(0, sigma^2 I_n)` is
/// captured with high probability: `(sigma sqrt(n + 2 sqrt(n log n)),
/// 2 sigma sqrt(log p))` for the l2 and Dantzig balls respectively.
pub fn gaussian_radii(sigma: f64, n: u64, p: u64) -> Result<(f64, f64)> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma must be positive and finite, got {sigma}")));
    }
    if n < 2 || p < 2 {
        return Err(Error::Domain(format!("need n >= 2 and p >= 2, got n = {n}, p = {p}")));
    }
    let (nf, pf) = (n as f64, p as f64);
    Ok((sigma * (nf + 2.0 * (nf * nf.ln()).sqrt()).sqrt(), 2.0 * sigma * pf.ln().sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii() {
        let (l2, ds) = gaussian_radii(1.0, 100, 256).unwrap();
        assert!((l2 - 11.954886888874647349).abs() < 1e-13);
        assert!((ds - 4.709640090061898764).abs() < 1e-13);
        let (l2b, dsb) = gaussian_radii(2.5, 100, 256).unwrap();
        assert!((l2b - 2.5 * l2).abs() < 1e-13 && (dsb - 2.5 * ds).abs() < 1e-13);
        assert!(gaussian_radii(0.0, 100, 256).is_err());
        assert!(gaussian_radii(1.0, 1, 256).is_err());
    }

    #[test]
    fn options_validation() {
        assert!(SolverOptions::default().validate().is_ok());
        assert!(SolverOptions { tolerance: 0.0, ..Default::default() }.validate().is_err());
        assert!(SolverOptions { max_iterations: 0, ..Default::default() }.validate().is_err());
    }
}
