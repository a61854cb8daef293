//! Lower bounds on the RIC of a linear map over rank-`r` matrices.
//!
//! Each trial starts from a random product `X = L R^T` of Gaussian factors.
//! With one factor held at orthonormal columns, `||X||_F` equals the
//! Frobenius norm of the other factor and `||M(X)||^2` is a quadratic form
//! in it, so the best update is an extreme eigenvector. Alternating these
//! updates climbs towards the largest (or, on a second chain, the smallest)
//! value of `||M(X)||^2` over unit-norm rank-`r` matrices. Every matrix
//! visited is an explicit witness, so the reported maximum of
//! `| ||M(X)||^2 - 1 |` is a certified lower bound on `delta_r`.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{RicMethod, RicReport};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, LinearMap};
use crate::rng;

/// Alternating updates per chain.
pub const ASCENT_STEPS: usize = 50;

#[derive(Clone, Copy)]
enum Direction {
    Up,
    Down,
}

pub fn ric_sampled(map: &LinearMap, r: usize, trials: usize, seed: u64) -> Result<RicReport> {
    let (m, n) = map.shape();
    if r == 0 || r > m.min(n) {
        return Err(Error::Range(format!("rank {r} must lie in [1, {}]", m.min(n))));
    }
    if trials == 0 {
        return Err(Error::Range("at least one trial is required".into()));
    }
    let value = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut g = rng::stream(seed, trial as u64);
            let mut draw = |len: usize| -> Vec<f64> { (0..len).map(|_| StandardNormal.sample(&mut g)).collect() };
            let left = draw(m * r);
            let right = draw(n * r);
            let mut best = deviation(map, &left, &right, r);
            for dir in [Direction::Up, Direction::Down] {
                best = best.max(ascend(map, r, &right, dir)?);
            }
            Ok(best)
        })
        .try_reduce(|| 0.0, |x: f64, y: f64| Ok(x.max(y)))?;
    Ok(RicReport {
        order: r as f64,
        effective_order: r,
        value,
        method: RicMethod::SampledLowerBound,
        supports_examined: trials as u128,
    })
}

/// `| ||M(L R^T)||^2 / ||L R^T||_F^2 - 1 |`; factors are column-major.
fn deviation(map: &LinearMap, left: &[f64], right: &[f64], r: usize) -> f64 {
    let (m, n) = map.shape();
    let mut x = vec![0.0; m * n];
    for j in 0..n {
        for i in 0..m {
            x[i + j * m] = (0..r).map(|c| left[i + c * m] * right[j + c * n]).sum();
        }
    }
    let fro: f64 = x.iter().map(|v| v * v).sum();
    if fro == 0.0 {
        return 0.0;
    }
    let y = map.matrix().matvec(&x);
    let energy: f64 = y.iter().map(|v| v * v).sum();
    (energy / fro - 1.0).abs()
}

fn ascend(map: &LinearMap, r: usize, start_right: &[f64], dir: Direction) -> Result<f64> {
    let (m, n) = map.shape();
    let mut right = start_right.to_vec();
    orthonormalize(&mut right, n, r);
    let mut best: f64 = 0.0;
    for _ in 0..ASCENT_STEPS {
        let left = extreme_factor(map, &right, r, Side::Left, dir)?;
        best = best.max(deviation(map, &left, &right, r));
        let mut q = left;
        orthonormalize(&mut q, m, r);
        let new_right = extreme_factor(map, &q, r, Side::Right, dir)?;
        best = best.max(deviation(map, &q, &new_right, r));
        right = new_right;
        orthonormalize(&mut right, n, r);
    }
    Ok(best)
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// With `fixed` orthonormal, returns the unit-norm free factor maximizing
/// (or minimizing) `||M(X)||^2`.
fn extreme_factor(map: &LinearMap, fixed: &[f64], r: usize, side: Side, dir: Direction) -> Result<Vec<f64>> {
    let (m, n) = map.shape();
    let mat = map.matrix();
    let q = mat.rows();
    let (free_dim, fixed_dim) = match side {
        Side::Left => (m, n),
        Side::Right => (n, m),
    };
    let width = free_dim * r;
    // b[:, a + c * free_dim] = sum_f fixed[f + c * fixed_dim] * M[:, vec index of (a, f)]
    let mut b = vec![0.0; q * width];
    for c in 0..r {
        for a in 0..free_dim {
            let col = a + c * free_dim;
            for f in 0..fixed_dim {
                let w = fixed[f + c * fixed_dim];
                if w == 0.0 {
                    continue;
                }
                let src = match side {
                    Side::Left => a + f * m,
                    Side::Right => f + a * m,
                };
                for row in 0..q {
                    b[row * width + col] += w * mat[(row, src)];
                }
            }
        }
    }
    let mut gram = vec![0.0; width * width];
    for i in 0..width {
        for j in i..width {
            let s: f64 = (0..q).map(|row| b[row * width + i] * b[row * width + j]).sum();
            gram[i * width + j] = s;
            gram[j * width + i] = s;
        }
    }
    let eig = symmetric_eigen(&gram, width)?;
    let pick = match dir {
        Direction::Up => width - 1,
        Direction::Down => 0,
    };
    Ok((0..width).map(|i| eig.vectors[i * width + pick]).collect())
}

/// Replaces the `r` column-major columns of length `dim` by an orthonormal
/// basis of a space containing their span.
fn orthonormalize(cols: &mut [f64], dim: usize, r: usize) {
    let mut next_unit = 0;
    for c in 0..r {
        loop {
            for _ in 0..2 {
                for prev in 0..c {
                    let d: f64 = (0..dim).map(|i| cols[i + c * dim] * cols[i + prev * dim]).sum();
                    for i in 0..dim {
                        cols[i + c * dim] -= d * cols[i + prev * dim];
                    }
                }
            }
            let norm: f64 = (0..dim).map(|i| cols[i + c * dim].powi(2)).sum::<f64>().sqrt();
            if norm > 1e-10 {
                for i in 0..dim {
                    cols[i + c * dim] /= norm;
                }
                break;
            }
            // dependent column: restart from a coordinate vector
            for i in 0..dim {
                cols[i + c * dim] = if i == next_unit % dim { 1.0 } else { 0.0 };
            }
            next_unit += 1;
        }
    }
}
