//! Observation models and constraint sets for the recovery programs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector, LinearMap};

/// Set that the residual `A beta - y` (or `M(X) - b`) must lie in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintSet {
    /// Exact fit.
    Zero,
    /// `||r||_2 <= radius`.
    L2Ball { radius: f64 },
    /// `||A^T r||_inf <= radius` for vectors, `||M^*(r)|| <= radius`
    /// (spectral norm) for matrices.
    DantzigBall { radius: f64 },
}

impl ConstraintSet {
    pub fn l2_ball(radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(Self::L2Ball { radius })
    }

    pub fn dantzig_ball(radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(Self::DantzigBall { radius })
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match *self {
            Self::Zero => Ok(()),
            Self::L2Ball { radius } | Self::DantzigBall { radius } => check_radius(radius),
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("constraint radius must be finite and nonnegative, got {r}")))
    }
}

/// `y = A beta + z` with the constraint used by the l1 program.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryProblem {
    pub matrix: DenseMatrix,
    pub observations: DenseVector,
    pub constraint: ConstraintSet,
}

impl RecoveryProblem {
    pub fn new(matrix: DenseMatrix, observations: DenseVector, constraint: ConstraintSet) -> Result<Self> {
        if observations.len() != matrix.rows() {
            return Err(Error::Shape(format!(
                "observation length {} does not match {} measurement rows",
                observations.len(),
                matrix.rows()
            )));
        }
        constraint.validate()?;
        Ok(Self { matrix, observations, constraint })
    }
}

/// `b = M(X) + z` with the constraint used by the nuclear-norm program.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmpProblem {
    pub map: LinearMap,
    pub observations: DenseVector,
    pub constraint: ConstraintSet,
}

impl ArmpProblem {
    pub fn new(map: LinearMap, observations: DenseVector, constraint: ConstraintSet) -> Result<Self> {
        if observations.len() != map.output_dim() {
            return Err(Error::Shape(format!(
                "observation length {} does not match map output dimension {}",
                observations.len(),
                map.output_dim()
            )));
        }
        constraint.validate()?;
        Ok(Self { map, observations, constraint })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let a = DenseMatrix::identity(2);
        let y = DenseVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(RecoveryProblem::new(a, y, ConstraintSet::Zero), Err(Error::Shape(_))));
        assert!(ConstraintSet::l2_ball(-1.0).is_err());
        assert!(ConstraintSet::dantzig_ball(f64::INFINITY).is_err());
        assert!(ConstraintSet::l2_ball(0.0).is_ok());
    }
}
