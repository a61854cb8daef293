//! Building blocks for the operator-splitting solvers: soft thresholding,
//! singular-value thresholding, and projection onto a residual ball
//! `{x : ||K x - b||_2 <= eta}`.

use crate::error::{Error, Result};
use crate::linalg::{dot, svd, DenseMatrix};

/// Entrywise `sign(x) * max(|x| - tau, 0)`.
pub fn soft_threshold(x: &[f64], tau: f64) -> Vec<f64> {
    x.iter().map(|&v| v.signum() * (v.abs() - tau).max(0.0)).collect()
}

/// Proximal map of `tau * ||.||_*`: shrinks every singular value by `tau`.
pub fn singular_value_threshold(x: &DenseMatrix, tau: f64) -> Result<DenseMatrix> {
    let d = svd(x)?;
    let shrunk: Vec<f64> = d.singular_values.iter().map(|s| (s - tau).max(0.0)).collect();
    Ok(d.reconstruct_with(&shrunk))
}

/// Relative distance to the range of `K` still treated as zero.
pub const RANGE_SLACK: f64 = 1e-9;

/// Euclidean projection onto `{x : ||K x - b||_2 <= eta}` through the thin
/// SVD of `K`. Only the row-space coordinates of `x` move; with `mu` the
/// multiplier of the active constraint, coordinate `i` becomes
/// `(a_i + mu s_i c_i) / (1 + mu s_i^2)` where `a = V^T x`, `c = U^T b`.
#[derive(Clone, Debug)]
pub struct ResidualBall {
    s: Vec<f64>,
    v: Vec<Vec<f64>>,
    c: Vec<f64>,
    perp_sq: f64,
    radius: f64,
}

impl ResidualBall {
    /// Fails with [`Error::Infeasible`] when `b` lies farther than `eta`
    /// from the range of `K`; the certificate `d` satisfies `K^T d = 0` and
    /// `b^T d > eta ||d||`.
    pub fn new(k: &DenseMatrix, b: &[f64], eta: f64) -> Result<Self> {
        let d = svd(k)?;
        let smax = d.singular_values.first().copied().unwrap_or(0.0);
        let cutoff = smax * 1e-12 * k.rows().max(k.cols()) as f64;
        let mut u = Vec::new();
        let mut s = Vec::new();
        let mut v = Vec::new();
        for (i, &si) in d.singular_values.iter().enumerate() {
            if si > cutoff && si > 0.0 {
                u.push(d.u.column(i));
                v.push(d.v.column(i));
                s.push(si);
            }
        }
        let c: Vec<f64> = u.iter().map(|ui| dot(ui, b)).collect();
        let mut perp = b.to_vec();
        for (ui, ci) in u.iter().zip(&c) {
            perp.iter_mut().zip(ui).for_each(|(p, x)| *p -= ci * x);
        }
        let perp_sq = dot(&perp, &perp);
        // rounding in the factorization leaves a residue of order 1e-12 ||b||
        // even when b = K x exactly
        let b_norm = dot(b, b).sqrt();
        if perp_sq.sqrt() > eta + RANGE_SLACK * b_norm.max(1.0) {
            return Err(Error::Infeasible {
                reason: format!(
                    "observations lie {:.6e} from the range of the operator, beyond the radius {eta:.6e}",
                    perp_sq.sqrt()
                ),
                certificate: perp,
            });
        }
        Ok(Self { s, v, c, perp_sq, radius: eta })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Distance from `b` to the range of `K`.
    pub fn range_distance(&self) -> f64 {
        self.perp_sq.sqrt()
    }

    /// Least-squares point of minimal norm, `K^+ b`.
    pub fn least_squares(&self, dim: usize) -> Vec<f64> {
        let mut x = vec![0.0; dim];
        for ((vi, si), ci) in self.v.iter().zip(&self.s).zip(&self.c) {
            x.iter_mut().zip(vi).for_each(|(o, e)| *o += ci / si * e);
        }
        x
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let a: Vec<f64> = self.v.iter().map(|vi| dot(vi, x)).collect();
        let dev: Vec<f64> = a.iter().zip(&self.s).zip(&self.c).map(|((ai, si), ci)| si * ai - ci).collect();
        let eta_sq = self.radius * self.radius;
        let target = eta_sq - self.perp_sq;
        let current: f64 = dev.iter().map(|d| d * d).sum();
        if current <= target * (1.0 + 1e-12) {
            return x.to_vec();
        }

        let alpha: Vec<f64> = if target <= 1e-14 * (eta_sq + current) {
            // ball shrinks to the least-residual affine set
            self.c.iter().zip(&self.s).map(|(ci, si)| ci / si).collect()
        } else {
            let phi = |mu: f64| -> (f64, f64) {
                let mut val = -target;
                let mut der = 0.0;
                for (d, si) in dev.iter().zip(&self.s) {
                    let w = 1.0 + mu * si * si;
                    val += d * d / (w * w);
                    der -= 2.0 * si * si * d * d / (w * w * w);
                }
                (val, der)
            };
            // phi is convex and decreasing, so Newton from the left is monotone
            let mut mu = 0.0;
            for _ in 0..200 {
                let (val, der) = phi(mu);
                if val <= 1e-15 * eta_sq || der == 0.0 {
                    break;
                }
                let next = mu - val / der;
                if next <= mu {
                    break;
                }
                mu = next;
            }
            a.iter()
                .zip(&self.s)
                .zip(&self.c)
                .map(|((ai, si), ci)| (ai + mu * si * ci) / (1.0 + mu * si * si))
                .collect()
        };

        let mut out = x.to_vec();
        for ((vi, ai), al) in self.v.iter().zip(&a).zip(&alpha) {
            let delta = al - ai;
            out.iter_mut().zip(vi).for_each(|(o, e)| *o += delta * e);
        }
        out
    }

    /// `||K x - b||_2` computed from the factorization.
    pub fn residual_norm(&self, x: &[f64]) -> f64 {
        let dev: f64 = self
            .v
            .iter()
            .zip(&self.s)
            .zip(&self.c)
            .map(|((vi, si), ci)| (si * dot(vi, x) - ci).powi(2))
            .sum();
        (dev + self.perp_sq).sqrt()
    }
}
