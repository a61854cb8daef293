use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::DenseMatrix;

/// Linear map from `m x n` matrices to `R^q`, acting on the column-major
/// vectorization of its argument.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    matrix: DenseMatrix,
    shape: (usize, usize),
}

/// Column-major vectorization: entry `(i, j)` goes to position `i + j * m`.
pub fn vectorize(x: &DenseMatrix) -> Vec<f64> {
    let (m, n) = x.shape();
    let mut out = Vec::with_capacity(m * n);
    for j in 0..n {
        for i in 0..m {
            out.push(x[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &[f64], m: usize, n: usize) -> DenseMatrix {
    assert_eq!(v.len(), m * n, "vector length does not match shape");
    let mut x = DenseMatrix::zeros(m, n);
    for j in 0..n {
        for i in 0..m {
            x[(i, j)] = v[i + j * m];
        }
    }
    x
}

impl LinearMap {
    pub fn new(matrix: DenseMatrix, shape: (usize, usize)) -> Result<Self> {
        let (m, n) = shape;
        if m == 0 || n == 0 {
            return Err(Error::Shape("matrix domain must be non-empty".into()));
        }
        if matrix.cols() != m * n {
            return Err(Error::Shape(format!(
                "map has {} columns but domain {m}x{n} needs {}",
                matrix.cols(),
                m * n
            )));
        }
        Ok(Self { matrix, shape })
    }

    /// The map `X -> c * vec(X)`.
    pub fn scaled_vectorization(c: f64, shape: (usize, usize)) -> Self {
        let d = shape.0 * shape.1;
        Self { matrix: DenseMatrix::identity(d).scaled(c), shape }
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn output_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &DenseMatrix) -> Vec<f64> {
        assert_eq!(x.shape(), self.shape, "argument shape does not match map domain");
        self.matrix.matvec(&vectorize(x))
    }

    /// Dual operator `M^*: R^q -> R^{m x n}`.
    pub fn adjoint(&self, z: &[f64]) -> DenseMatrix {
        unvectorize(&self.matrix.matvec_t(z), self.shape.0, self.shape.1)
    }
}
