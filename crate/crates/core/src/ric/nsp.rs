//! Null space property of order `k`: every nonzero `h` with `A h = 0`
//! satisfies `||h_S||_1 < ||h_{S^c}||_1` for all `|S| = k`.
//!
//! For a fixed support the largest value of `||h_S||_1` over null vectors
//! with `||h_{S^c}||_1 <= 1` is the maximum, over sign patterns `sigma`, of
//! the linear program `max sigma^T h_S  s.t.  A h = 0, ||h_{S^c}||_1 <= 1`.
//! Call it `gamma_S`; the property holds on `S` iff `gamma_S < 1`.
//! Patterns `sigma` and `-sigma` give the same value, so only patterns with
//! `sigma_0 = +1` are solved. The reported margin
//! `(gamma - 1) / (gamma + 1)` equals the maximum of
//! `||h_S||_1 - ||h_{S^c}||_1` over null vectors with `||h||_1 = 1`.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{binomial, check_budget};
use crate::error::{Error, Result};
use crate::linalg::{svd, DenseMatrix};
use crate::solvers::lp::{self, LpStatus, StandardForm};

/// Margins at or above this count as violations.
pub const NSP_MARGIN_TOL: f64 = -1e-10;
const LP_ITERATION_CAP: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NspReport {
    pub holds: bool,
    /// Largest `||h_S||_1 - ||h_{S^c}||_1` over unit-l1 null vectors and
    /// supports of size `k`; `-1` when the null space is trivial.
    pub worst_margin: f64,
    pub worst_support: Vec<usize>,
    pub trivial_null_space: bool,
    pub programs_solved: u128,
}

pub fn nsp_verify(a: &DenseMatrix, k: usize) -> Result<bool> {
    nsp_report(a, k).map(|r| r.holds)
}

pub fn nsp_report(a: &DenseMatrix, k: usize) -> Result<NspReport> {
    let (n, p) = a.shape();
    if k == 0 || k > p {
        return Err(Error::Range(format!("order {k} must lie in [1, {p}]")));
    }
    if n >= p {
        let d = svd(a)?;
        let smax = d.singular_values[0];
        let smin = d.singular_values[p - 1];
        if smin > smax * 1e-10 * p as f64 {
            return Ok(NspReport {
                holds: true,
                worst_margin: -1.0,
                worst_support: Vec::new(),
                trivial_null_space: true,
                programs_solved: 0,
            });
        }
    }
    let patterns = 1u128 << (k - 1);
    let count = binomial(p, k).saturating_mul(patterns);
    check_budget(count)?;

    let supports: Vec<Vec<usize>> = (0..p).combinations(k).collect();
    let results: Vec<(f64, usize)> = supports
        .par_iter()
        .enumerate()
        .map(|(idx, s)| support_gamma(a, s).map(|g| (g, idx)))
        .collect::<Result<_>>()?;
    let (gamma, idx) = results
        .into_iter()
        .fold((f64::NEG_INFINITY, 0), |best, cur| if cur.0 > best.0 { cur } else { best });
    let margin = if gamma.is_infinite() { 1.0 } else { (gamma - 1.0) / (gamma + 1.0) };
    Ok(NspReport {
        holds: margin < NSP_MARGIN_TOL,
        worst_margin: margin,
        worst_support: supports[idx].clone(),
        trivial_null_space: false,
        programs_solved: count,
    })
}

/// `gamma_S`, or `+inf` when some nonzero null vector lives on `S`.
fn support_gamma(a: &DenseMatrix, support: &[usize]) -> Result<f64> {
    let (n, p) = a.shape();
    let k = support.len();
    // variables: u (p), v (p), slack (1); h = u - v
    let cols = 2 * p + 1;
    let rows = n + 1;
    let mut m = vec![0.0; rows * cols];
    for i in 0..n {
        for j in 0..p {
            m[i * cols + j] = a[(i, j)];
            m[i * cols + p + j] = -a[(i, j)];
        }
    }
    for j in (0..p).filter(|j| !support.contains(j)) {
        m[n * cols + j] = 1.0;
        m[n * cols + p + j] = 1.0;
    }
    m[n * cols + 2 * p] = 1.0;
    let mut b = vec![0.0; rows];
    b[n] = 1.0;

    let mut best: f64 = 0.0;
    for pattern in 0..(1usize << (k - 1)) {
        let mut c = vec![0.0; cols];
        for (pos, &j) in support.iter().enumerate() {
            let sign = if pos > 0 && (pattern >> (pos - 1)) & 1 == 1 { -1.0 } else { 1.0 };
            c[j] = -sign;
            c[p + j] = sign;
        }
        let sol = lp::solve(&StandardForm { a: &m, rows, cols, b: &b, c: &c }, LP_ITERATION_CAP)?;
        match sol.status {
            LpStatus::Optimal => best = best.max(-sol.objective),
            LpStatus::Unbounded => return Ok(f64::INFINITY),
            LpStatus::IterationLimit => {
                return Err(Error::Numeric(format!("null space LP for support {support:?} hit the iteration cap")))
            }
        }
    }
    Ok(best)
}
