//! LU factorization with partial pivoting for small dense square systems.

use crate::error::{Error, Result};

/// `P A = L U` for a row-major `n x n` matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &[f64], n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n, "LU input must be n x n");
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let singular_tol = scale * n as f64 * f64::EPSILON;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| lu[i * n + col].abs().total_cmp(&lu[j * n + col].abs()))
                .expect("non-empty range");
            let pivot = lu[pivot_row * n + col];
            if pivot.abs() <= singular_tol || pivot == 0.0 {
                return Err(Error::Numeric(format!("matrix is singular to working precision at column {col}")));
            }
            if pivot_row != col {
                for k in 0..n {
                    lu.swap(col * n + k, pivot_row * n + k);
                }
                perm.swap(col, pivot_row);
            }
            for i in (col + 1)..n {
                let f = lu[i * n + col] / pivot;
                lu[i * n + col] = f;
                if f != 0.0 {
                    for k in (col + 1)..n {
                        lu[i * n + k] -= f * lu[col * n + k];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.lu[i * n + k] * x[k]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|k| self.lu[i * n + k] * x[k]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.lu[k * n + i] * z[k]).sum();
            z[i] = (z[i] - s) / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|k| self.lu[k * n + i] * z[k]).sum();
            z[i] -= s;
        }
        let mut x = vec![0.0; n];
        for (row, &orig) in self.perm.iter().enumerate() {
            x[orig] = z[row];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_both_orientations() {
        let a = [0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let lu = Lu::factor(&a, 3).unwrap();
        let b = [3.0, 2.0, 4.0];
        let x = lu.solve(&b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|k| a[i * 3 + k] * x[k]).sum();
            assert!((r - b[i]).abs() < 1e-14);
        }
        let y = lu.solve_transpose(&b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|k| a[k * 3 + i] * y[k]).sum();
            assert!((r - b[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_rejected() {
        assert!(Lu::factor(&[1.0, 2.0, 2.0, 4.0], 2).is_err());
    }
}
