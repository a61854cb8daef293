//! `min ||X||_*` subject to `M(X) - b` lying in a constraint set.
//!
//! Equality and l2-ball constraints use Douglas-Rachford splitting between
//! singular-value thresholding and the exact projection onto the feasible
//! set. The Dantzig constraint `||M^*(M(X) - b)|| <= eta` (spectral norm)
//! uses a primal-dual (Chambolle-Pock) iteration with `K = M^* M`, whose
//! dual step projects onto a spectral-norm ball around `M^*(b)`.

use super::splitting::{singular_value_threshold, ResidualBall};
use super::{MatrixRecoveryResult, SolverOptions};
use crate::error::Result;
use crate::linalg::{nuclear_norm, spectral_norm, svd, unvectorize, vectorize, DenseMatrix, LinearMap};
use crate::problem::{ArmpProblem, ConstraintSet};

pub fn nuclear_min(problem: &ArmpProblem, opts: &SolverOptions) -> Result<MatrixRecoveryResult> {
    opts.validate()?;
    let b = problem.observations.as_slice();
    match problem.constraint {
        ConstraintSet::Zero => douglas_rachford(&problem.map, b, 0.0, opts),
        ConstraintSet::L2Ball { radius } => douglas_rachford(&problem.map, b, radius, opts),
        ConstraintSet::DantzigBall { radius } => primal_dual(&problem.map, b, radius, opts),
    }
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn zero_result(m: usize, n: usize) -> MatrixRecoveryResult {
    MatrixRecoveryResult {
        estimate: DenseMatrix::zeros(m, n),
        nuclear_objective: 0.0,
        constraint_residual: 0.0,
        iterations: 0,
        converged: true,
        fixed_point_residual: 0.0,
    }
}

/// Threshold level for the proximal step, proportional to the scale of the
/// least-squares point.
fn prox_scale(x_ls: &[f64], m: usize, n: usize) -> f64 {
    (0.1 * l2(x_ls) / (m.min(n) as f64).sqrt()).max(f64::MIN_POSITIVE)
}

fn douglas_rachford(map: &LinearMap, b: &[f64], eta: f64, opts: &SolverOptions) -> Result<MatrixRecoveryResult> {
    let (m, n) = map.shape();
    let ball = ResidualBall::new(map.matrix(), b, eta)?;
    if eta >= l2(b) {
        return Ok(zero_result(m, n));
    }
    let mut z = ball.least_squares(m * n);
    let gamma = prox_scale(&z, m, n);
    let mut x = ball.project(&z);
    let mut fixed_point = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        x = ball.project(&z);
        let reflected: Vec<f64> = x.iter().zip(&z).map(|(xi, zi)| 2.0 * xi - zi).collect();
        let low_rank = vectorize(&singular_value_threshold(&unvectorize(&reflected, m, n), gamma)?);
        let mut step = 0.0;
        for ((zi, yi), xi) in z.iter_mut().zip(&low_rank).zip(&x) {
            let d = yi - xi;
            *zi += d;
            step += d * d;
        }
        fixed_point = step.sqrt() / l2(&x).max(1.0);
        if fixed_point <= opts.tolerance {
            break;
        }
    }
    let excess = (ball.residual_norm(&x) - eta).max(0.0);
    let estimate = unvectorize(&x, m, n);
    Ok(MatrixRecoveryResult {
        nuclear_objective: nuclear_norm(&estimate)?,
        estimate,
        constraint_residual: excess,
        iterations,
        converged: fixed_point <= opts.tolerance && excess <= opts.tolerance,
        fixed_point_residual: fixed_point,
    })
}

/// Caps singular values at `eta`: projection onto the spectral-norm ball.
fn clip_spectrum(x: &DenseMatrix, eta: f64) -> Result<DenseMatrix> {
    let d = svd(x)?;
    let capped: Vec<f64> = d.singular_values.iter().map(|s| s.min(eta)).collect();
    Ok(d.reconstruct_with(&capped))
}

fn primal_dual(map: &LinearMap, b: &[f64], eta: f64, opts: &SolverOptions) -> Result<MatrixRecoveryResult> {
    let (m, n) = map.shape();
    let mat = map.matrix();
    let apply_k = |x: &[f64]| mat.matvec_t(&mat.matvec(x));
    let center = mat.matvec_t(b);
    let excess_of = |x: &[f64]| -> Result<f64> {
        let g: Vec<f64> = apply_k(x).iter().zip(&center).map(|(k, c)| k - c).collect();
        Ok((spectral_norm(&unvectorize(&g, m, n))? - eta).max(0.0))
    };
    if spectral_norm(&unvectorize(&center, m, n))? <= eta {
        return Ok(zero_result(m, n));
    }

    let op_norm = spectral_norm(mat)?.powi(2);
    let step = 0.99 / op_norm;
    let ball = ResidualBall::new(mat, b, f64::INFINITY)?;
    let mut x = ball.least_squares(m * n);
    let mut xi = vec![0.0; m * n];
    let mut fixed_point = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let kxi = apply_k(&xi);
        let descent: Vec<f64> = x.iter().zip(&kxi).map(|(a, g)| a - step * g).collect();
        let x_next = vectorize(&singular_value_threshold(&unvectorize(&descent, m, n), step)?);
        let extrapolated: Vec<f64> = x_next.iter().zip(&x).map(|(a, b)| 2.0 * a - b).collect();
        let kx = apply_k(&extrapolated);
        let v: Vec<f64> = xi.iter().zip(&kx).map(|(a, k)| a + step * k).collect();
        // Moreau: prox of the conjugate indicator is v - step * P_D(v / step)
        let shifted: Vec<f64> = v.iter().zip(&center).map(|(vi, c)| vi / step - c).collect();
        let clipped = vectorize(&clip_spectrum(&unvectorize(&shifted, m, n), eta)?);
        let xi_next: Vec<f64> =
            v.iter().zip(&clipped).zip(&center).map(|((vi, cl), c)| vi - step * (c + cl)).collect();

        let dx = l2(&x_next.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>());
        let dxi = l2(&xi_next.iter().zip(&xi).map(|(a, b)| a - b).collect::<Vec<_>>());
        fixed_point = (dx + step * dxi) / l2(&x_next).max(1.0);
        x = x_next;
        xi = xi_next;
        if fixed_point <= opts.tolerance && excess_of(&x)? <= opts.tolerance {
            break;
        }
    }
    let excess = excess_of(&x)?;
    let estimate = unvectorize(&x, m, n);
    Ok(MatrixRecoveryResult {
        nuclear_objective: nuclear_norm(&estimate)?,
        estimate,
        constraint_residual: excess,
        iterations,
        converged: fixed_point <= opts.tolerance && excess <= opts.tolerance,
        fixed_point_residual: fixed_point,
    })
}
