//! Closed-form RIC thresholds, sample-size curve, probability bound, and
//! the exact-recovery decision rules.
//!
//! Logarithms are natural throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdStatus {
    Sharp,
    Conjectured,
}

impl std::fmt::Display for ThresholdStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Sharp => "sharp",
            Self::Conjectured => "conjectured",
        })
    }
}

const FOUR_THIRDS: f64 = 4.0 / 3.0;

/// `sqrt((t - 1) / t)`, written as `sqrt(1 - 1/t)` so that `t = 4/3` gives
/// exactly `1/2`.
fn sharp_threshold(t: f64) -> f64 {
    (1.0 - 1.0 / t).sqrt()
}

/// Sharp RIC threshold of order `tk` for uniform exact recovery.
///
/// `sqrt((t-1)/t)` for `t >= 4/3` and `1/3` at `t = 1` are sharp. Elsewhere
/// on `(0, 4/3)` the value `t / (4 - t)` is conjectural; both branches meet
/// at `1/2` when `t = 4/3`.
pub fn delta_star(t: f64) -> Result<(f64, ThresholdStatus)> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("t must be positive and finite, got {t}")));
    }
    Ok(if t >= FOUR_THIRDS {
        (sharp_threshold(t), ThresholdStatus::Sharp)
    } else if t == 1.0 {
        (1.0 / 3.0, ThresholdStatus::Sharp)
    } else {
        (t / (4.0 - t), ThresholdStatus::Conjectured)
    })
}

/// Sample-size proxy `t / (d^2/16 - d^3/48)` with `d = delta_star(t)`,
/// written out per branch.
pub fn n_star(t: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("t must be positive and finite, got {t}")));
    }
    let denom = if t < FOUR_THIRDS {
        let u = 4.0 - t;
        t * t / (16.0 * u * u) - t.powi(3) / (48.0 * u.powi(3))
    } else {
        (t - 1.0) / (16.0 * t) - (t - 1.0).powf(1.5) / (48.0 * t.powf(1.5))
    };
    if !(denom > 0.0) {
        return Err(Error::Domain(format!("n_star denominator is nonpositive at t = {t}")));
    }
    Ok(t / denom)
}

/// Lower bound on `P(delta_m < lambda)` for an `n x p` matrix with i.i.d.
/// `N(0, 1/n)` entries:
/// `1 - 2 (12 e p / (m lambda))^m exp(-n (lambda^2/16 - lambda^3/48))`.
///
/// Evaluated in log space; the result is clamped above at 1 and may be
/// `-inf` when the subtracted term overflows.
pub fn ric_probability_bound(n: u64, p: u64, m: u64, lambda: f64) -> Result<f64> {
    if !(m > 0 && m < n) {
        return Err(Error::Domain(format!("need 0 < m < n, got m = {m}, n = {n}")));
    }
    if p == 0 {
        return Err(Error::Domain("p must be positive".into()));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let (n, p, m) = (n as f64, p as f64, m as f64);
    let log_term = std::f64::consts::LN_2 + m * (12.0 * std::f64::consts::E * p / (m * lambda)).ln()
        - n * (lambda * lambda / 16.0 - lambda.powi(3) / 48.0);
    Ok((1.0 - log_term.exp()).min(1.0))
}

/// `delta_{sk} <= (2s - 1) delta_k`.
pub fn ric_upscale_bound(delta_k: f64, s: f64) -> Result<f64> {
    if !(delta_k >= 0.0 && delta_k.is_finite()) {
        return Err(Error::Domain(format!("delta_k must be nonnegative and finite, got {delta_k}")));
    }
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::Domain(format!("s must exceed 1, got {s}")));
    }
    Ok((2.0 * s - 1.0) * delta_k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuaranteeRule {
    SharpHighOrder,
    EvenTkLowOrder,
    OddTkLowOrder,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeVerdict {
    pub guaranteed: bool,
    pub rule_applied: GuaranteeRule,
    /// Threshold `delta_tk` was compared against, when some rule covers `t`.
    pub threshold_used: Option<f64>,
}

impl GuaranteeVerdict {
    fn decide(delta: f64, threshold: f64, rule: GuaranteeRule) -> Self {
        let guaranteed = delta < threshold;
        Self {
            guaranteed,
            rule_applied: if guaranteed { rule } else { GuaranteeRule::None },
            threshold_used: Some(threshold),
        }
    }

    fn uncovered() -> Self {
        Self { guaranteed: false, rule_applied: GuaranteeRule::None, threshold_used: None }
    }
}

/// Whether `delta_tk < threshold` certifies exact recovery of every
/// `k`-sparse signal by noiseless l1 minimization.
///
/// Covered cases: `t >= 4/3` with the sharp threshold, and `0 < t < 1` with
/// `tk` an integer (even: `t / (4 - t)`; odd:
/// `sqrt(t^2 - 1/k^2) / (4 - 2t + sqrt(t^2 - 1/k^2))`). Any other `t`,
/// including `1 <= t < 4/3` where the high-order argument is not sharp,
/// yields `GuaranteeRule::None`. A negative verdict means only that no
/// implemented condition applies.
pub fn guarantee_exact_recovery(delta_tk: f64, t: f64, k: usize) -> GuaranteeVerdict {
    if !(delta_tk >= 0.0 && t > 0.0 && t.is_finite() && k >= 1) {
        return GuaranteeVerdict::uncovered();
    }
    if t >= FOUR_THIRDS {
        return GuaranteeVerdict::decide(delta_tk, sharp_threshold(t), GuaranteeRule::SharpHighOrder);
    }
    if t >= 1.0 {
        return GuaranteeVerdict::uncovered();
    }
    let tk = t * k as f64;
    let nearest = tk.round();
    if (tk - nearest).abs() > 1e-9 * nearest.max(1.0) || nearest < 1.0 {
        return GuaranteeVerdict::uncovered();
    }
    if nearest as u64 % 2 == 0 {
        GuaranteeVerdict::decide(delta_tk, t / (4.0 - t), GuaranteeRule::EvenTkLowOrder)
    } else {
        let kf = k as f64;
        let root = (t * t - 1.0 / (kf * kf)).max(0.0).sqrt();
        GuaranteeVerdict::decide(delta_tk, root / (4.0 - 2.0 * t + root), GuaranteeRule::OddTkLowOrder)
    }
}
