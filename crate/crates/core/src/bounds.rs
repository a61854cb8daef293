//! Closed-form recovery error bounds under `delta_tk < sqrt((t-1)/t)`,
//! `t >= 4/3`.
//!
//! With `d = 1 - sqrt(t/(t-1)) delta`, `thr = sqrt((t-1)/t)` and the tail
//! term `P = 2 tail / sqrt(k)`, every bound has the shape
//! `lead * noise / d + C * P` where
//! `C = (sqrt(2) delta + sqrt(t (thr - delta) delta)) / (t (thr - delta)) + 1`.
//! For matrices the tail is the nuclear norm of `X - X_max(r)` and `r`
//! replaces `k`. Logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// RIC of order `tk` (or `tr`).
    pub delta: f64,
    pub t: f64,
    /// Noise level `||z||_2 <= eps` (or `||A^T z||_inf <= eps`).
    pub eps: f64,
    /// Constraint radius, `eta >= eps`.
    pub eta: f64,
    /// `||beta - beta_max(k)||_1`, or the nuclear norm of the rank-`r` tail.
    pub tail_l1: f64,
    pub k_or_r: usize,
    pub sigma: f64,
    pub n: u64,
    pub p: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    L2,
    Ds,
}

fn threshold(t: f64) -> f64 {
    (1.0 - 1.0 / t).sqrt()
}

fn check_order(delta: f64, t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 4.0 / 3.0) {
        return Err(Error::Domain(format!("bounds need t >= 4/3, got {t}")));
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::Domain(format!("delta must be nonnegative, got {delta}")));
    }
    let thr = threshold(t);
    if delta >= thr {
        return Err(Error::GuaranteeVoid { delta, threshold: thr });
    }
    Ok(())
}

fn nonnegative(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and nonnegative, got {x}")))
    }
}

impl BoundInputs {
    fn check_common(&self) -> Result<()> {
        check_order(self.delta, self.t)?;
        nonnegative("tail_l1", self.tail_l1)?;
        if self.k_or_r == 0 {
            return Err(Error::Domain("k (or r) must be at least 1".into()));
        }
        Ok(())
    }

    fn check_noise(&self) -> Result<()> {
        self.check_common()?;
        nonnegative("eps", self.eps)?;
        nonnegative("eta", self.eta)?;
        if self.eta < self.eps {
            return Err(Error::Domain(format!("eta = {} is below eps = {}", self.eta, self.eps)));
        }
        Ok(())
    }

    fn denominator(&self) -> f64 {
        1.0 - (self.t / (self.t - 1.0)).sqrt() * self.delta
    }

    fn tail_term(&self) -> f64 {
        let (d, t) = (self.delta, self.t);
        let gap = threshold(t) - d;
        let coefficient = (2f64.sqrt() * d + (t * gap * d).sqrt()) / (t * gap) + 1.0;
        coefficient * 2.0 * self.tail_l1 / (self.k_or_r as f64).sqrt()
    }
}

/// Error bound for the l2-ball constrained program.
pub fn error_bound_l2(inputs: &BoundInputs) -> Result<f64> {
    inputs.check_noise()?;
    let lead = (2.0 * (1.0 + inputs.delta)).sqrt() / inputs.denominator();
    Ok(lead * (inputs.eps + inputs.eta) + inputs.tail_term())
}

/// Error bound for the Dantzig-constrained program.
pub fn error_bound_ds(inputs: &BoundInputs) -> Result<f64> {
    inputs.check_noise()?;
    let lead = (2.0 * inputs.t * inputs.k_or_r as f64).sqrt() / inputs.denominator();
    Ok(lead * (inputs.eps + inputs.eta) + inputs.tail_term())
}

/// Matrix analogue; `k_or_r` is the rank `r` and `tail_l1` the nuclear norm
/// of the tail. Algebraically identical to the vector bounds.
pub fn error_bound_matrix(inputs: &BoundInputs, kind: BoundKind) -> Result<f64> {
    match kind {
        BoundKind::L2 => error_bound_l2(inputs),
        BoundKind::Ds => error_bound_ds(inputs),
    }
}

/// Bound and probability for Gaussian noise `N(0, sigma^2 I_n)`, with the
/// constraint radius set to the matching Gaussian radius.
pub fn gaussian_bound(inputs: &BoundInputs, kind: BoundKind) -> Result<(f64, f64)> {
    inputs.check_common()?;
    if !(inputs.sigma > 0.0 && inputs.sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma must be positive, got {}", inputs.sigma)));
    }
    if inputs.n < 2 || inputs.p < 2 {
        return Err(Error::Domain(format!("need n >= 2 and p >= 2, got n = {}, p = {}", inputs.n, inputs.p)));
    }
    let (n, p) = (inputs.n as f64, inputs.p as f64);
    let d = inputs.denominator();
    Ok(match kind {
        BoundKind::L2 => {
            let radius = inputs.sigma * (n + 2.0 * (n * n.ln()).sqrt()).sqrt();
            let lead = 2.0 * (2.0 * (1.0 + inputs.delta)).sqrt() / d;
            (lead * radius + inputs.tail_term(), 1.0 - 1.0 / n)
        }
        BoundKind::Ds => {
            let lead = 4.0 * (2.0 * inputs.t).sqrt() / d;
            let noise = inputs.sigma * (inputs.k_or_r as f64 * p.ln()).sqrt();
            (lead * noise + inputs.tail_term(), 1.0 - 1.0 / (std::f64::consts::PI * p.ln()).sqrt())
        }
    })
}

/// Oracle inequality right-hand side
/// `256 t / d^2 * log p * sum_i min(beta_i^2, sigma^2)`.
pub fn oracle_bound(t: f64, delta: f64, p: u64, sigma: f64, beta: &[f64]) -> Result<f64> {
    check_order(delta, t)?;
    if p < 2 {
        return Err(Error::Domain(format!("p must be at least 2, got {p}")));
    }
    nonnegative("sigma", sigma)?;
    let d = 1.0 - (t / (t - 1.0)).sqrt() * delta;
    let s2 = sigma * sigma;
    let ideal: f64 = beta.iter().map(|b| (b * b).min(s2)).sum();
    Ok(256.0 * t / (d * d) * (p as f64).ln() * ideal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(delta: f64, t: f64, k: usize, eps: f64, eta: f64, tail: f64) -> BoundInputs {
        BoundInputs { delta, t, eps, eta, tail_l1: tail, k_or_r: k, sigma: 1.0, n: 100, p: 256 }
    }

    #[test]
    fn noiseless_exact_sparse_is_zero() {
        let i = inputs(0.3, 2.0, 3, 0.0, 0.0, 0.0);
        assert_eq!(error_bound_l2(&i).unwrap(), 0.0);
        assert_eq!(error_bound_ds(&i).unwrap(), 0.0);
    }

    #[test]
    fn reference_values() {
        let v = error_bound_l2(&inputs(0.5, 2.0, 4, 0.1, 0.1, 0.0)).unwrap();
        assert!((v - 1.1827182715841865371).abs() < 1e-13);
        let v = error_bound_ds(&inputs(0.5, 2.0, 4, 0.1, 0.1, 0.0)).unwrap();
        assert!((v - 2.7313708498984760390).abs() < 1e-13);
        // delta = 0 collapses the tail coefficient to 1
        let v = error_bound_l2(&inputs(0.0, 2.0, 4, 0.0, 0.0, 1.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn guarantee_void_above_threshold() {
        let r = error_bound_l2(&inputs(0.75, 2.0, 4, 0.1, 0.1, 0.0));
        assert!(matches!(r, Err(Error::GuaranteeVoid { .. })));
        assert!(matches!(error_bound_l2(&inputs(0.1, 1.2, 4, 0.1, 0.1, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(error_bound_l2(&inputs(0.1, 2.0, 4, 0.2, 0.1, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn gaussian_probabilities() {
        let i = BoundInputs { n: 100, p: 55, ..inputs(0.0, 2.0, 2, 0.0, 0.0, 0.0) };
        assert!((gaussian_bound(&i, BoundKind::L2).unwrap().1 - 0.99).abs() < 1e-15);
        assert!((gaussian_bound(&i, BoundKind::Ds).unwrap().1 - 0.71816343489596431888).abs() < 1e-14);
        let (b, _) = gaussian_bound(&i, BoundKind::L2).unwrap();
        let expected = 2.0 * 2f64.sqrt() * (100.0 + 2.0 * (100.0 * 100f64.ln()).sqrt()).sqrt();
        assert!((b - expected).abs() < 1e-12);
    }

    #[test]
    fn oracle() {
        let v = oracle_bound(2.0, 0.5, 100, 1.0, &[10.0, 10.0, 0.1, 0.0]).unwrap();
        assert!((v - 55245.011599802114264).abs() < 1e-8);
        assert_eq!(oracle_bound(2.0, 0.5, 100, 0.0, &[1.0]).unwrap(), 0.0);
        assert_eq!(oracle_bound(2.0, 0.5, 100, 1.0, &[0.0, 0.0]).unwrap(), 0.0);
    }
}
