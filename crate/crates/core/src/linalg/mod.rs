//! Dense real linear algebra: vectors, matrices, norms, truncations, and
//! Jacobi-based spectral decompositions.

mod eigen;
mod lu;
mod map;
mod matrix;
mod svd;
mod vector;

pub use eigen::{symmetric_eigen, symmetric_eigenvalues, SymmetricEigen};
pub use map::{unvectorize, vectorize, LinearMap};
pub use matrix::{spectral_norm_estimate, DenseMatrix};
pub use svd::{nuclear_norm, rank_r_truncate, spectral_norm, svd, Svd};
pub use vector::{norm, top_k_truncate, DenseVector, Norm, SupportSet};

pub use lu::Lu;

pub(crate) use vector::dot;
