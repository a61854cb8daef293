//! Exact RIC and ROC by exhaustive support enumeration.

use itertools::Itertools;
use rayon::prelude::*;

use super::{binomial, check_budget, effective_order, RicMethod, RicReport};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigenvalues, DenseMatrix};

/// Full Gram matrix `A^T A`, row-major `p x p`.
fn gram(a: &DenseMatrix) -> Vec<f64> {
    a.column_gram(&(0..a.cols()).collect::<Vec<_>>())
}

fn sub_gram(g: &[f64], p: usize, rows: &[usize], cols: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for &i in rows {
        for &j in cols {
            out.push(g[i * p + j]);
        }
    }
    out
}

/// `delta_s(A)`: the largest deviation of `A_S^T A_S` from the identity
/// over all supports of size `ceil(s)`.
pub fn ric_exact(a: &DenseMatrix, s: f64) -> Result<RicReport> {
    let k = effective_order(s)?;
    let p = a.cols();
    if k > p {
        return Err(Error::Range(format!("order {k} exceeds the number of columns {p}")));
    }
    let count = binomial(p, k);
    check_budget(count)?;

    let g = gram(a);
    let supports: Vec<Vec<usize>> = (0..p).combinations(k).collect();
    let value = supports
        .par_iter()
        .map(|support| {
            let eig = symmetric_eigenvalues(&sub_gram(&g, p, support, support), k)?;
            let (lo, hi) = (eig[0], eig[k - 1]);
            Ok((hi - 1.0).max(1.0 - lo).max(0.0))
        })
        .try_reduce(|| 0.0, |x: f64, y: f64| Ok(x.max(y)))?;

    Ok(RicReport { order: s, effective_order: k, value, method: RicMethod::ExactEnumeration, supports_examined: count })
}

/// `theta_{k1,k2}(A)`: the largest singular value of `A_{S1}^T A_{S2}` over
/// disjoint supports with `|S1| = k1`, `|S2| = k2`.
pub fn roc_exact(a: &DenseMatrix, k1: usize, k2: usize) -> Result<f64> {
    let p = a.cols();
    if k1 == 0 || k2 == 0 {
        return Err(Error::Range("ROC orders must be at least 1".into()));
    }
    if k1 + k2 > p {
        return Err(Error::Range(format!("k1 + k2 = {} exceeds the number of columns {p}", k1 + k2)));
    }
    let count = binomial(p, k1).saturating_mul(binomial(p - k1, k2));
    check_budget(count)?;

    let g = gram(a);
    let firsts: Vec<Vec<usize>> = (0..p).combinations(k1).collect();
    firsts
        .par_iter()
        .map(|s1| {
            let rest: Vec<usize> = (0..p).filter(|i| !s1.contains(i)).collect();
            let mut best: f64 = 0.0;
            for s2 in rest.iter().copied().combinations(k2) {
                let cross = sub_gram(&g, p, s1, &s2);
                best = best.max(largest_singular_value(&cross, k1, k2)?);
            }
            Ok(best)
        })
        .try_reduce(|| 0.0, |x: f64, y: f64| Ok(x.max(y)))
}

/// Largest singular value of a row-major `r x c` block via the smaller Gram.
fn largest_singular_value(m: &[f64], r: usize, c: usize) -> Result<f64> {
    let (small, gram) = if r <= c {
        let mut g = vec![0.0; r * r];
        for i in 0..r {
            for j in 0..r {
                g[i * r + j] = (0..c).map(|l| m[i * c + l] * m[j * c + l]).sum();
            }
        }
        (r, g)
    } else {
        let mut g = vec![0.0; c * c];
        for i in 0..c {
            for j in 0..c {
                g[i * c + j] = (0..r).map(|l| m[l * c + i] * m[l * c + j]).sum();
            }
        }
        (c, g)
    };
    let eig = symmetric_eigenvalues(&gram, small)?;
    Ok(eig[small - 1].max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometries_and_scalings() {
        let i = DenseMatrix::identity(5);
        assert_eq!(ric_exact(&i, 3.0).unwrap().value, 0.0);
        assert_eq!(roc_exact(&i, 2, 2).unwrap(), 0.0);
        let c = i.scaled(1.5);
        assert!((ric_exact(&c, 2.0).unwrap().value - 1.25).abs() < 1e-14);
        assert!((ric_exact(&i.scaled(0.5), 2.0).unwrap().value - 0.75).abs() < 1e-14);
    }

    #[test]
    fn fractional_order_uses_ceiling() {
        let r = ric_exact(&DenseMatrix::identity(4), 1.5).unwrap();
        assert_eq!(r.effective_order, 2);
        assert_eq!(r.supports_examined, 6);
    }

    #[test]
    fn budget_and_range_errors() {
        let a = DenseMatrix::identity(40);
        assert!(matches!(ric_exact(&a, 20.0), Err(Error::Budget { .. })));
        assert!(matches!(ric_exact(&DenseMatrix::identity(3), 4.0), Err(Error::Range(_))));
        assert!(matches!(roc_exact(&DenseMatrix::identity(3), 2, 2), Err(Error::Range(_))));
    }

    #[test]
    fn two_column_roc_is_inner_product() {
        let a = DenseMatrix::from_rows(vec![vec![1.0, 0.6], vec![0.0, 0.8]]).unwrap();
        assert!((roc_exact(&a, 1, 1).unwrap() - 0.6).abs() < 1e-14);
        // Gram [[1, .6], [.6, 1]] has eigenvalues 0.4 and 1.6
        assert!((ric_exact(&a, 2.0).unwrap().value - 0.6).abs() < 1e-14);
    }
}
