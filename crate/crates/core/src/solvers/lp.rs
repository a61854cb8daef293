//! Dense two-phase tableau simplex for standard-form linear programs
//! `min c^T x  s.t.  M x = b, x >= 0`.
//!
//! Pivoting uses the most-negative reduced cost and falls back to Bland's
//! rule once a run of degenerate pivots suggests cycling. On termination the
//! primal point and the duals are recomputed from the final basis with a
//! fresh LU solve, and the certificates (primal residual, duality gap, dual
//! infeasibility) are evaluated on the original data.

use crate::error::{Error, Result};
use crate::linalg::Lu;

const PIVOT_TOL: f64 = 1e-9;
const REDUCED_COST_TOL: f64 = 1e-10;
const FEASIBILITY_TOL: f64 = 1e-9;

/// Borrowed standard-form data, `a` row-major `rows x cols`.
#[derive(Clone, Copy, Debug)]
pub struct StandardForm<'a> {
    pub a: &'a [f64],
    pub rows: usize,
    pub cols: usize,
    pub b: &'a [f64],
    pub c: &'a [f64],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    /// Equality-constraint multipliers `w`, optimal when `M^T w <= c`.
    pub dual: Vec<f64>,
    pub objective: f64,
    /// `c^T x - b^T w`.
    pub duality_gap: f64,
    /// `max(0, max_j (M^T w - c)_j)`.
    pub dual_infeasibility: f64,
    /// `||M x - b||_inf`.
    pub primal_residual: f64,
    pub iterations: usize,
    /// Direction of unbounded descent when `status == Unbounded`.
    pub ray: Option<Vec<f64>>,
}

struct Tableau {
    m: usize,
    n: usize,
    width: usize,
    t: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
}

enum Run {
    Optimal,
    Unbounded(usize),
    Limit,
}

impl Tableau {
    fn at(&self, r: usize, j: usize) -> f64 {
        self.t[r * (self.width + 1) + j]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width)
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let w = self.width + 1;
        let p = self.t[r * w + j];
        for k in 0..w {
            self.t[r * w + k] /= p;
        }
        let (prow_start, prow_end) = (r * w, (r + 1) * w);
        let prow: Vec<f64> = self.t[prow_start..prow_end].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * w + j];
            if f != 0.0 {
                for (dst, src) in self.t[i * w..(i + 1) * w].iter_mut().zip(&prow) {
                    *dst -= f * src;
                }
                self.t[i * w + j] = 0.0;
            }
        }
        let f = self.obj[j];
        if f != 0.0 {
            for (dst, src) in self.obj.iter_mut().zip(&prow) {
                *dst -= f * src;
            }
            self.obj[j] = 0.0;
        }
        self.basis[r] = j;
    }

    fn run(&mut self, entering_limit: usize, cost_tol: f64, budget: usize, iterations: &mut usize) -> Run {
        let mut bland = false;
        let mut degenerate_streak = 0;
        loop {
            let candidates = (0..entering_limit).filter(|&j| self.obj[j] < -cost_tol);
            let entering = if bland {
                candidates.into_iter().next()
            } else {
                candidates.min_by(|&a, &b| self.obj[a].total_cmp(&self.obj[b]))
            };
            let Some(j) = entering else { return Run::Optimal };
            if *iterations >= budget {
                return Run::Limit;
            }

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, j);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        if ratio < best_ratio - 1e-12 * (1.0 + best_ratio) {
                            Some((r, ratio))
                        } else if ratio <= best_ratio + 1e-12 * (1.0 + best_ratio) {
                            let better = if bland {
                                self.basis[r] < self.basis[best]
                            } else {
                                a > self.at(best, j)
                            };
                            if better { Some((r, ratio.min(best_ratio))) } else { Some((best, best_ratio)) }
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leave else { return Run::Unbounded(j) };
            if ratio <= 1e-14 {
                degenerate_streak += 1;
                if degenerate_streak > 2 * self.m + 10 {
                    bland = true;
                }
            } else {
                degenerate_streak = 0;
            }
            self.pivot(r, j);
            *iterations += 1;
        }
    }
}

/// Solves the program. Infeasibility is reported as [`Error::Infeasible`]
/// carrying a Farkas vector `w` with `M^T w <= 0` and `b^T w > 0`.
pub fn solve(lp: &StandardForm<'_>, max_iterations: usize) -> Result<LpSolution> {
    let (m, n) = (lp.rows, lp.cols);
    if lp.a.len() != m * n || lp.b.len() != m || lp.c.len() != n {
        return Err(Error::Shape("linear program data has inconsistent dimensions".into()));
    }
    let signs: Vec<f64> = lp.b.iter().map(|&bi| if bi < 0.0 { -1.0 } else { 1.0 }).collect();
    let width = n + m;
    let mut t = vec![0.0; m * (width + 1)];
    for i in 0..m {
        let row = &mut t[i * (width + 1)..(i + 1) * (width + 1)];
        for j in 0..n {
            row[j] = signs[i] * lp.a[i * n + j];
        }
        row[n + i] = 1.0;
        row[width] = signs[i] * lp.b[i];
    }
    // phase one minimizes the sum of artificials
    let mut obj = vec![0.0; width + 1];
    for i in 0..m {
        for k in 0..=width {
            if k < n || k == width {
                obj[k] -= t[i * (width + 1) + k];
            }
        }
    }
    let mut tab = Tableau { m, n, width, t, obj, basis: (n..n + m).collect() };
    let mut iterations = 0;

    let b_scale = lp.b.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    let phase_one = tab.run(n, REDUCED_COST_TOL, max_iterations, &mut iterations);
    if let Run::Limit = phase_one {
        return Ok(finish(lp, &tab, &signs, LpStatus::IterationLimit, iterations, None));
    }
    let infeasibility: f64 = (0..m).filter(|&r| tab.basis[r] >= n).map(|r| tab.rhs(r).max(0.0)).sum();
    if infeasibility > FEASIBILITY_TOL * b_scale {
        let c_b: Vec<f64> = tab.basis.iter().map(|&j| if j >= n { 1.0 } else { 0.0 }).collect();
        let w = basis_lu(lp, &tab, &signs)
            .map(|lu| lu.solve_transpose(&c_b))
            .unwrap_or_else(|_| (0..m).map(|i| 1.0 - tab.obj[n + i]).collect());
        let certificate: Vec<f64> = w.iter().zip(&signs).map(|(wi, s)| wi * s).collect();
        return Err(Error::Infeasible {
            reason: format!("equality constraints admit no nonnegative solution (phase-one residual {infeasibility:.3e})"),
            certificate,
        });
    }

    // move remaining zero-level artificials out of the basis where possible;
    // rows where that fails are linearly redundant and stay inert
    for r in 0..m {
        if tab.basis[r] < n {
            continue;
        }
        let best = (0..n)
            .filter(|&j| !tab.basis.contains(&j))
            .max_by(|&a, &b| tab.at(r, a).abs().total_cmp(&tab.at(r, b).abs()));
        if let Some(j) = best {
            if tab.at(r, j).abs() > PIVOT_TOL {
                tab.pivot(r, j);
            }
        }
    }

    let mut obj = vec![0.0; width + 1];
    obj[..n].copy_from_slice(lp.c);
    for r in 0..m {
        let cb = if tab.basis[r] < n { lp.c[tab.basis[r]] } else { 0.0 };
        if cb != 0.0 {
            for k in 0..=width {
                obj[k] -= cb * tab.at(r, k);
            }
        }
    }
    tab.obj = obj;
    let c_scale = lp.c.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    let status;
    let mut ray = None;
    match tab.run(n, REDUCED_COST_TOL * c_scale, max_iterations, &mut iterations) {
        Run::Optimal => status = LpStatus::Optimal,
        Run::Limit => status = LpStatus::IterationLimit,
        Run::Unbounded(j) => {
            status = LpStatus::Unbounded;
            let mut d = vec![0.0; n];
            d[j] = 1.0;
            for r in 0..m {
                if tab.basis[r] < n {
                    d[tab.basis[r]] = -tab.at(r, j);
                }
            }
            ray = Some(d);
        }
    }
    Ok(finish(lp, &tab, &signs, status, iterations, ray))
}

fn basis_lu(lp: &StandardForm<'_>, tab: &Tableau, signs: &[f64]) -> Result<Lu> {
    let m = tab.m;
    let mut bm = vec![0.0; m * m];
    for (col, &j) in tab.basis.iter().enumerate() {
        for i in 0..m {
            bm[i * m + col] = if j < tab.n {
                signs[i] * lp.a[i * tab.n + j]
            } else if j - tab.n == i {
                1.0
            } else {
                0.0
            };
        }
    }
    Lu::factor(&bm, m)
}

fn finish(
    lp: &StandardForm<'_>,
    tab: &Tableau,
    signs: &[f64],
    status: LpStatus,
    iterations: usize,
    ray: Option<Vec<f64>>,
) -> LpSolution {
    let (m, n) = (tab.m, tab.n);
    let flipped_b: Vec<f64> = lp.b.iter().zip(signs).map(|(b, s)| b * s).collect();
    let c_b: Vec<f64> = tab.basis.iter().map(|&j| if j < n { lp.c[j] } else { 0.0 }).collect();
    let (x_b, w) = match basis_lu(lp, tab, signs) {
        Ok(lu) => (lu.solve(&flipped_b), lu.solve_transpose(&c_b)),
        Err(_) => ((0..m).map(|r| tab.rhs(r)).collect(), (0..m).map(|i| -tab.obj[n + i]).collect()),
    };
    let mut x = vec![0.0; n];
    for (r, &j) in tab.basis.iter().enumerate() {
        if j < n {
            x[j] = x_b[r].max(0.0);
        }
    }
    let dual: Vec<f64> = w.iter().zip(signs).map(|(wi, s)| wi * s).collect();

    let objective: f64 = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
    let dual_objective: f64 = lp.b.iter().zip(&dual).map(|(b, w)| b * w).sum();
    let mut dual_infeasibility: f64 = 0.0;
    for j in 0..n {
        let mtw: f64 = (0..m).map(|i| lp.a[i * n + j] * dual[i]).sum();
        dual_infeasibility = dual_infeasibility.max(mtw - lp.c[j]);
    }
    let mut primal_residual: f64 = 0.0;
    for i in 0..m {
        let mx: f64 = (0..n).map(|j| lp.a[i * n + j] * x[j]).sum();
        primal_residual = primal_residual.max((mx - lp.b[i]).abs());
    }
    LpSolution {
        status,
        x,
        dual,
        objective,
        duality_gap: objective - dual_objective,
        dual_infeasibility,
        primal_residual,
        iterations,
        ray,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp<'a>(a: &'a [f64], rows: usize, b: &'a [f64], c: &'a [f64]) -> StandardForm<'a> {
        StandardForm { a, rows, cols: c.len(), b, c }
    }

    #[test]
    fn small_optimum() {
        // min -x1 - 2 x2  s.t. x1 + x2 + s1 = 4, x1 + 3 x2 + s2 = 6
        let a = [1.0, 1.0, 1.0, 0.0, 1.0, 3.0, 0.0, 1.0];
        let sol = solve(&lp(&a, 2, &[4.0, 6.0], &[-1.0, -2.0, 0.0, 0.0]), 100).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 3.0).abs() < 1e-12 && (sol.x[1] - 1.0).abs() < 1e-12);
        assert!((sol.objective + 5.0).abs() < 1e-12);
        assert!(sol.duality_gap.abs() < 1e-12 && sol.dual_infeasibility < 1e-12);
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // x1 - x2 = -1 stated twice
        let a = [1.0, -1.0, 1.0, -1.0];
        let sol = solve(&lp(&a, 2, &[-1.0, -1.0], &[1.0, 1.0]), 100).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[1] - 1.0).abs() < 1e-12 && sol.x[0].abs() < 1e-12);
        assert!(sol.duality_gap.abs() < 1e-12 && sol.dual_infeasibility < 1e-12);
    }

    #[test]
    fn infeasible_with_farkas_certificate() {
        // x1 + x2 = -1 with x >= 0
        let a = [1.0, 1.0];
        let err = solve(&lp(&a, 1, &[-1.0], &[1.0, 1.0]), 100).unwrap_err();
        let Error::Infeasible { certificate, .. } = err else { panic!("expected infeasible") };
        assert!(certificate[0] * -1.0 > 0.0);
        assert!(certificate[0] * 1.0 <= 1e-12);
    }

    #[test]
    fn unbounded_ray() {
        // min -x1  s.t. x1 - x2 = 0
        let a = [1.0, -1.0];
        let sol = solve(&lp(&a, 1, &[0.0], &[-1.0, 0.0]), 100).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
        let d = sol.ray.unwrap();
        assert!(d[0] > 0.0 && (d[0] - d[1]).abs() < 1e-12);
    }
}
