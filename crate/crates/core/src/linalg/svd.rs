//! One-sided (Hestenes) Jacobi singular value decomposition.

use crate::error::{Error, Result};

use super::DenseMatrix;

const ORTHOGONALITY_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Thin SVD `X = U diag(s) V^T` with `k = min(m, n)` components.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `m x k`, orthonormal columns.
    pub u: DenseMatrix,
    /// Nonnegative, descending.
    pub singular_values: Vec<f64>,
    /// `n x k`, orthonormal columns.
    pub v: DenseMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(&self.singular_values)
    }

    /// `U diag(values) V^T` for replacement singular values.
    pub fn reconstruct_with(&self, values: &[f64]) -> DenseMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut out = DenseMatrix::zeros(m, n);
        for (c, &s) in values.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            for i in 0..m {
                let ui = self.u[(i, c)] * s;
                if ui == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += ui * self.v[(j, c)];
                }
            }
        }
        out
    }
}

pub fn svd(x: &DenseMatrix) -> Result<Svd> {
    if x.rows() >= x.cols() {
        tall_svd(x)
    } else {
        let t = tall_svd(&x.transpose())?;
        Ok(Svd { u: t.v, singular_values: t.singular_values, v: t.u })
    }
}

/// Column-major working copy for the rotations.
fn columns_of(x: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..x.cols()).map(|j| x.column(j)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(j);
    let (ci, cj) = (&mut lo[i], &mut hi[0]);
    for (a, b) in ci.iter_mut().zip(cj.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

fn tall_svd(x: &DenseMatrix) -> Result<Svd> {
    let (m, n) = x.shape();
    let mut u = columns_of(x);
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = dot(&u[i], &u[i]);
                let beta = dot(&u[j], &u[j]);
                let gamma = dot(&u[i], &u[j]);
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut u, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!("one-sided Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")));
    }

    let sv: Vec<f64> = u.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));

    let smax = order.first().map_or(0.0, |&i| sv[i]);
    let negligible = smax * f64::EPSILON * m as f64;

    let mut u_sorted: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut v_sorted: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut s_sorted = Vec::with_capacity(n);
    let mut needs_completion = Vec::new();
    for (slot, &i) in order.iter().enumerate() {
        let s = sv[i];
        if s > negligible && s > 0.0 {
            u_sorted.push(u[i].iter().map(|x| x / s).collect());
        } else {
            u_sorted.push(vec![0.0; m]);
            needs_completion.push(slot);
        }
        v_sorted.push(std::mem::take(&mut v[i]));
        s_sorted.push(s);
    }
    complete_orthonormal(&mut u_sorted, &needs_completion)?;

    let mut um = DenseMatrix::zeros(m, n);
    let mut vm = DenseMatrix::zeros(n, n);
    for c in 0..n {
        for r in 0..m {
            um[(r, c)] = u_sorted[c][r];
        }
        for r in 0..n {
            vm[(r, c)] = v_sorted[c][r];
        }
    }
    Ok(Svd { u: um, singular_values: s_sorted, v: vm })
}

/// Fills the listed columns with unit vectors orthogonal to all others.
fn complete_orthonormal(cols: &mut [Vec<f64>], slots: &[usize]) -> Result<()> {
    if slots.is_empty() {
        return Ok(());
    }
    let m = cols[0].len();
    let mut candidate = 0;
    for &slot in slots {
        loop {
            if candidate == m {
                return Err(Error::Internal("orthonormal completion ran out of candidates".into()));
            }
            let mut w = vec![0.0; m];
            w[candidate] = 1.0;
            candidate += 1;
            // two Gram-Schmidt passes
            for _ in 0..2 {
                for (k, c) in cols.iter().enumerate() {
                    if k == slot || c.iter().all(|x| *x == 0.0) {
                        continue;
                    }
                    let d = dot(&w, c);
                    w.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
                }
            }
            let nw = dot(&w, &w).sqrt();
            if nw > 1e-8 {
                cols[slot] = w.into_iter().map(|x| x / nw).collect();
                break;
            }
        }
    }
    Ok(())
}

/// Best rank-`r` approximation and its remainder, `head + tail = X`.
pub fn rank_r_truncate(x: &DenseMatrix, r: usize) -> Result<(DenseMatrix, DenseMatrix)> {
    let k = x.rows().min(x.cols());
    if r > k {
        return Err(Error::Range(format!("rank {r} exceeds min(m, n) = {k}")));
    }
    if r == k {
        return Ok((x.clone(), DenseMatrix::zeros(x.rows(), x.cols())));
    }
    let d = svd(x)?;
    let kept: Vec<f64> = d.singular_values.iter().enumerate().map(|(i, &s)| if i < r { s } else { 0.0 }).collect();
    let head = d.reconstruct_with(&kept);
    let tail = x.sub(&head);
    Ok((head, tail))
}

pub fn nuclear_norm(x: &DenseMatrix) -> Result<f64> {
    Ok(svd(x)?.singular_values.iter().sum())
}

pub fn spectral_norm(x: &DenseMatrix) -> Result<f64> {
    Ok(svd(x)?.singular_values.first().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormal_residual(q: &DenseMatrix) -> f64 {
        let g = q.transpose().matmul(q);
        let mut worst: f64 = 0.0;
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).abs());
            }
        }
        worst
    }

    #[test]
    fn diagonal() {
        let d = svd(&DenseMatrix::from_diagonal(&[1.0, 3.0])).unwrap();
        assert_eq!(d.singular_values, vec![3.0, 1.0]);
    }

    #[test]
    fn zero_matrix_has_orthonormal_factors() {
        let d = svd(&DenseMatrix::zeros(3, 2)).unwrap();
        assert_eq!(d.singular_values, vec![0.0, 0.0]);
        assert!(orthonormal_residual(&d.u) < 1e-12);
        assert!(orthonormal_residual(&d.v) < 1e-12);
    }

    #[test]
    fn wide_matrix() {
        let x = DenseMatrix::from_rows(vec![vec![1.0, 2.0, 3.0], vec![-1.0, 0.5, 4.0]]).unwrap();
        let d = svd(&x).unwrap();
        assert_eq!(d.u.shape(), (2, 2));
        assert_eq!(d.v.shape(), (3, 2));
        assert!(d.reconstruct().sub(&x).frobenius_norm() < 1e-13 * x.frobenius_norm());
    }

    #[test]
    fn rank_deficient() {
        // rank one 3x3
        let x = DenseMatrix::from_rows(vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![-1.0, -2.0, -3.0]]).unwrap();
        let d = svd(&x).unwrap();
        assert!(d.singular_values[1] < 1e-14);
        assert!(orthonormal_residual(&d.u) < 1e-10);
        assert!(d.reconstruct().sub(&x).frobenius_norm() < 1e-13);
        let (head, tail) = rank_r_truncate(&x, 1).unwrap();
        assert!(tail.frobenius_norm() < 1e-13);
        assert!(head.sub(&x).frobenius_norm() < 1e-13);
    }

    #[test]
    fn truncation_of_ordered_diagonal() {
        let (head, tail) = rank_r_truncate(&DenseMatrix::from_diagonal(&[3.0, 1.0]), 1).unwrap();
        assert!((head[(0, 0)] - 3.0).abs() < 1e-15 && head[(1, 1)].abs() < 1e-15);
        assert!((tail[(1, 1)] - 1.0).abs() < 1e-15);
        let full = rank_r_truncate(&DenseMatrix::from_diagonal(&[3.0, 1.0]), 2).unwrap();
        assert_eq!(full.1.frobenius_norm(), 0.0);
        assert!(rank_r_truncate(&DenseMatrix::from_diagonal(&[3.0, 1.0]), 3).is_err());
    }
}
