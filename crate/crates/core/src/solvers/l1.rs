//! `min ||beta||_1` subject to `A beta - y` lying in a constraint set.
//!
//! Equality and Dantzig constraints are linear programs in the split
//! `beta = u - v`, `u, v >= 0`, solved by the simplex in [`super::lp`]. The
//! l2 ball is handled by Douglas-Rachford splitting between the l1 prox and
//! the exact projection onto `{beta : ||A beta - y||_2 <= eta}`, with
//! periodic polishing on the identified support, grown by an active-set
//! pass until the optimality conditions hold; its optimality gap is the
//! duality gap against the dual point `w = r / ||A^T r||_inf`, `r = y - A beta`.

use super::lp::{self, LpSolution, LpStatus, StandardForm};
use super::splitting::{soft_threshold, ResidualBall};
use super::{RecoveryResult, SolverOptions};
use crate::error::{Error, Result};
use crate::linalg::{norm, DenseMatrix, DenseVector, Lu, Norm};
use crate::problem::{ConstraintSet, RecoveryProblem};

pub fn l1_min(problem: &RecoveryProblem, opts: &SolverOptions) -> Result<RecoveryResult> {
    opts.validate()?;
    let a = &problem.matrix;
    let y = problem.observations.as_slice();
    match problem.constraint {
        ConstraintSet::Zero => basis_pursuit(a, y, opts),
        ConstraintSet::DantzigBall { radius } => dantzig(a, y, radius, opts),
        ConstraintSet::L2Ball { radius } => l2_ball(a, y, radius, opts),
    }
}

fn split_estimate(x: &[f64], p: usize) -> Vec<f64> {
    (0..p).map(|j| x[j] - x[p + j]).collect()
}

fn residual(a: &DenseMatrix, beta: &[f64], y: &[f64]) -> Vec<f64> {
    a.matvec(beta).iter().zip(y).map(|(ab, yi)| ab - yi).collect()
}

fn lp_result(sol: &LpSolution, estimate: Vec<f64>, constraint_residual: f64, opts: &SolverOptions) -> Result<RecoveryResult> {
    if sol.status == LpStatus::Unbounded {
        return Err(Error::Internal("l1 program reported an unbounded objective".into()));
    }
    let gap = sol.duality_gap.abs().max(sol.dual_infeasibility);
    let converged = sol.status == LpStatus::Optimal && constraint_residual <= opts.tolerance && gap <= opts.tolerance;
    Ok(RecoveryResult {
        objective: norm(&estimate, Norm::L1),
        estimate: DenseVector::from_vec_unchecked(estimate),
        constraint_residual,
        iterations: sol.iterations,
        converged,
        optimality_gap: gap,
    })
}

fn basis_pursuit(a: &DenseMatrix, y: &[f64], opts: &SolverOptions) -> Result<RecoveryResult> {
    let (n, p) = a.shape();
    let cols = 2 * p;
    let mut m = vec![0.0; n * cols];
    for i in 0..n {
        for j in 0..p {
            m[i * cols + j] = a[(i, j)];
            m[i * cols + p + j] = -a[(i, j)];
        }
    }
    let c = vec![1.0; cols];
    let sol = lp::solve(&StandardForm { a: &m, rows: n, cols, b: y, c: &c }, opts.max_iterations)?;
    let beta = split_estimate(&sol.x, p);
    let res = norm(&residual(a, &beta, y), Norm::L2);
    lp_result(&sol, beta, res, opts)
}

fn dantzig(a: &DenseMatrix, y: &[f64], eta: f64, opts: &SolverOptions) -> Result<RecoveryResult> {
    let p = a.cols();
    let g = a.column_gram(&(0..p).collect::<Vec<_>>());
    let aty = a.matvec_t(y);
    // variables u, v, s1, s2; rows G(u - v) + s1 = A^T y + eta, -G(u - v) + s2 = eta - A^T y
    let (rows, cols) = (2 * p, 4 * p);
    let mut m = vec![0.0; rows * cols];
    let mut b = vec![0.0; rows];
    for i in 0..p {
        for j in 0..p {
            let gij = g[i * p + j];
            m[i * cols + j] = gij;
            m[i * cols + p + j] = -gij;
            m[(p + i) * cols + j] = -gij;
            m[(p + i) * cols + p + j] = gij;
        }
        m[i * cols + 2 * p + i] = 1.0;
        m[(p + i) * cols + 3 * p + i] = 1.0;
        b[i] = aty[i] + eta;
        b[p + i] = eta - aty[i];
    }
    let mut c = vec![0.0; cols];
    c[..2 * p].iter_mut().for_each(|x| *x = 1.0);
    let sol = lp::solve(&StandardForm { a: &m, rows, cols, b: &b, c: &c }, opts.max_iterations)?;
    let beta = split_estimate(&sol.x, p);
    let corr = a.matvec_t(&residual(a, &beta, y));
    let excess = (norm(&corr, Norm::Linf) - eta).max(0.0);
    lp_result(&sol, beta, excess, opts)
}

/// A primal point with its dual certificate for the l2-ball program.
struct Certified {
    beta: Vec<f64>,
    gap: f64,
    excess: f64,
}

/// Dual point `w = r / ||A^T r||_inf` built from the residual of `beta`.
fn certify(a: &DenseMatrix, y: &[f64], eta: f64, beta: Vec<f64>) -> Certified {
    let r: Vec<f64> = y.iter().zip(a.matvec(&beta)).map(|(yi, ab)| yi - ab).collect();
    let rnorm = norm(&r, Norm::L2);
    let excess = (rnorm - eta).max(0.0);
    let scale = norm(&a.matvec_t(&r), Norm::Linf);
    let primal = norm(&beta, Norm::L1);
    let dual = if scale > 0.0 {
        let ytr: f64 = y.iter().zip(&r).map(|(a, b)| a * b).sum();
        (ytr - eta * rnorm) / scale
    } else {
        f64::NEG_INFINITY
    };
    Certified { beta, gap: (primal - dual).max(0.0), excess }
}

/// Solves the KKT system on a fixed support and sign pattern: the residual
/// sits on the sphere `||r|| = eta` with `A_S^T r = c * signs`.
fn polish(a: &DenseMatrix, y: &[f64], eta: f64, support: &[usize], signs: &[f64]) -> Option<Vec<f64>> {
    let k = support.len();
    if k == 0 || k > a.rows() {
        return None;
    }
    let lu = Lu::factor(&a.column_gram(support), k).ok()?;
    let a_s = a.select_columns(support);
    let ls = lu.solve(&a_s.matvec_t(y));
    let r_ls: Vec<f64> = y.iter().zip(a_s.matvec(&ls)).map(|(yi, v)| yi - v).collect();
    let q = lu.solve(signs);
    let sq: f64 = signs.iter().zip(&q).map(|(s, q)| s * q).sum();
    let room = eta * eta - r_ls.iter().map(|x| x * x).sum::<f64>();
    if !(sq > 0.0 && room > 0.0) {
        return None;
    }
    let c = (room / sq).sqrt();
    let mut beta = vec![0.0; a.cols()];
    for (i, &j) in support.iter().enumerate() {
        let v = ls[i] - c * q[i];
        if v * signs[i] <= 0.0 {
            return None;
        }
        beta[j] = v;
    }
    Some(beta)
}

/// Active-set refinement of [`polish`]: while some off-support correlation
/// `|a_j^T r|` exceeds the on-support level, the worst offender joins the
/// support with the sign of its correlation. Every polished point is fed to
/// `visit`.
fn refine(a: &DenseMatrix, y: &[f64], eta: f64, mut support: Vec<usize>, mut signs: Vec<f64>, mut visit: impl FnMut(Vec<f64>)) {
    for _ in 0..a.cols() {
        let Some(beta) = polish(a, y, eta, &support, &signs) else { return };
        let r: Vec<f64> = y.iter().zip(a.matvec(&beta)).map(|(yi, ab)| yi - ab).collect();
        let corr = a.matvec_t(&r);
        let level = support.iter().map(|&j| corr[j].abs()).fold(0.0, f64::max);
        visit(beta);
        let worst = (0..a.cols())
            .filter(|j| !support.contains(j))
            .max_by(|&i, &j| corr[i].abs().total_cmp(&corr[j].abs()));
        match worst {
            Some(j) if corr[j].abs() > level * (1.0 + 1e-12) => {
                let at = support.partition_point(|&i| i < j);
                support.insert(at, j);
                signs.insert(at, corr[j].signum());
            }
            _ => return,
        }
    }
}

const POLISH_EVERY: usize = 25;
const POLISH_CUTOFFS: [f64; 4] = [0.0, 1e-8, 1e-5, 1e-3];

fn l2_ball(a: &DenseMatrix, y: &[f64], eta: f64, opts: &SolverOptions) -> Result<RecoveryResult> {
    let p = a.cols();
    let ball = ResidualBall::new(a, y, eta)?;
    if eta >= norm(y, Norm::L2) {
        return Ok(RecoveryResult {
            estimate: DenseVector::zeros(p),
            objective: 0.0,
            constraint_residual: 0.0,
            iterations: 0,
            converged: true,
            optimality_gap: 0.0,
        });
    }

    let mut z = ball.least_squares(p);
    if eta * eta - ball.range_distance().powi(2) <= 1e-14 * norm(y, Norm::L2).powi(2) {
        // no room inside the ball: the feasible set is A b = P_range(y)
        let mut result = basis_pursuit(a, &a.matvec(&z), opts)?;
        result.constraint_residual = (norm(&residual(a, &result.estimate, y), Norm::L2) - eta).max(0.0);
        result.converged &= result.constraint_residual <= opts.tolerance;
        return Ok(result);
    }
    let gamma = 0.1 * norm(&z, Norm::Linf).max(f64::MIN_POSITIVE);
    let mut best: Option<Certified> = None;
    let mut iterations = 0;
    let consider = |cand: Certified, best: &mut Option<Certified>| {
        let score = |c: &Certified| c.gap.max(c.excess);
        if best.as_ref().is_none_or(|b| score(&cand) < score(b)) {
            *best = Some(cand);
        }
    };
    let done = |c: &Option<Certified>| c.as_ref().is_some_and(|c| c.gap <= opts.tolerance && c.excess <= opts.tolerance);

    while iterations < opts.max_iterations {
        iterations += 1;
        let x = ball.project(&z);
        let reflected: Vec<f64> = x.iter().zip(&z).map(|(xi, zi)| 2.0 * xi - zi).collect();
        let sparse = soft_threshold(&reflected, gamma);
        for ((zi, si), xi) in z.iter_mut().zip(&sparse).zip(&x) {
            *zi += si - xi;
        }
        if iterations % POLISH_EVERY == 0 || iterations == opts.max_iterations {
            // slowly vanishing entries can linger in the iterate, so several
            // relative cutoffs are tried and the certificate picks the winner
            let peak = norm(&sparse, Norm::Linf);
            let mut tried: Vec<Vec<usize>> = Vec::new();
            for cutoff in POLISH_CUTOFFS {
                let support: Vec<usize> = (0..p).filter(|&j| sparse[j].abs() > cutoff * peak).collect();
                if tried.contains(&support) {
                    continue;
                }
                let signs: Vec<f64> = support.iter().map(|&j| sparse[j].signum()).collect();
                tried.push(support.clone());
                refine(a, y, eta, support, signs, |beta| consider(certify(a, y, eta, beta), &mut best));
            }
            consider(certify(a, y, eta, x), &mut best);
            if done(&best) {
                break;
            }
        }
    }

    let best = best.unwrap_or_else(|| certify(a, y, eta, ball.project(&z)));
    Ok(RecoveryResult {
        objective: norm(&best.beta, Norm::L1),
        converged: best.gap <= opts.tolerance && best.excess <= opts.tolerance,
        estimate: DenseVector::from_vec_unchecked(best.beta),
        constraint_residual: best.excess,
        iterations,
        optimality_gap: best.gap,
    })
}
