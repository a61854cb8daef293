use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An index, order, or dimension argument fell outside its admissible range.
    #[error("range error: {0}")]
    Range(String),

    /// A scalar parameter violated the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operand shapes do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A value was NaN or infinite where finite data is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// A vector passed to the polytope decomposition is outside `T(alpha, s)`.
    #[error("vector is not a member of T(alpha={alpha}, s={s})")]
    NotMember { alpha: f64, s: usize },

    /// Support enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {count} supports > {budget}; use the sampled estimator instead")]
    Budget { count: u128, budget: u128 },

    /// The constraint set admits no feasible point. `certificate` is a Farkas
    /// ray (LP case) or a residual direction (ball case) proving it.
    #[error("infeasible problem: {reason}")]
    Infeasible { reason: String, certificate: Vec<f64> },

    /// An error bound was requested for an RIC value at or above its threshold.
    #[error("guarantee does not apply: delta {delta} >= threshold {threshold}")]
    GuaranteeVoid { delta: f64, threshold: f64 },

    /// An iterative numerical kernel failed to converge.
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// Malformed text input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Violated internal invariant. Reaching this is a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
