//! Restricted isometry and orthogonality constants, the null space
//! property, RIC thresholds, and the exact-recovery decision rules.

mod exact;
mod nsp;
mod sampled;
mod thresholds;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use exact::{ric_exact, roc_exact};
pub use nsp::{nsp_report, nsp_verify, NspReport};
pub use sampled::{ric_sampled, ASCENT_STEPS};
pub use thresholds::{
    delta_star, guarantee_exact_recovery, n_star, ric_probability_bound, ric_upscale_bound, GuaranteeRule,
    GuaranteeVerdict, ThresholdStatus,
};

/// Upper limit on the number of supports (or support pairs, or LPs) any
/// enumeration will visit.
pub const ENUMERATION_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RicMethod {
    ExactEnumeration,
    SampledLowerBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicReport {
    /// Requested order; non-integral orders use `ceil(order)`.
    pub order: f64,
    pub effective_order: usize,
    pub value: f64,
    pub method: RicMethod,
    /// Supports visited (exact) or random starts refined (sampled).
    pub supports_examined: u128,
}

/// `ceil(s)`, treating values within `1e-9` of an integer as that integer
/// so that products such as `t * k` computed in floating point land where
/// intended.
pub fn effective_order(s: f64) -> Result<usize> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!("order must be positive and finite, got {s}")));
    }
    let nearest = s.round();
    let k = if (s - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { s.ceil() };
    Ok(k as usize)
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub(crate) fn check_budget(count: u128) -> Result<()> {
    if count > ENUMERATION_BUDGET {
        return Err(Error::Budget { count, budget: ENUMERATION_BUDGET });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 2), 120);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn effective_orders() {
        assert_eq!(effective_order(2.0).unwrap(), 2);
        assert_eq!(effective_order(2.5).unwrap(), 3);
        assert_eq!(effective_order(4.0 / 3.0 * 3.0).unwrap(), 4);
        assert_eq!(effective_order(3.0000000000000004).unwrap(), 3);
        assert!(effective_order(0.0).is_err());
    }
}
