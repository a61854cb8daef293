//! Sparse representation of points in the polytope
//! `T(alpha, s) = { v : ||v||_inf <= alpha, ||v||_1 <= s * alpha }`.
//!
//! Every member of `T(alpha, s)` is a convex combination of `s`-sparse
//! vectors `u` with `supp(u) ⊆ supp(v)`, `||u||_1 = ||v||_1` and
//! `||u||_inf <= alpha`. [`decompose`] builds such a combination
//! constructively: an `l`-sparse working vector (`l > s`) with sorted
//! magnitudes `a_1 >= ... >= a_l > 0` is split into `l - j + 1` vectors that
//! are `(l - 1)`-sparse, where `j` is the largest index with
//! `a_j + ... + a_l <= (l - j) * alpha`. Child `w` keeps `a_1..a_{j-1}`,
//! drops coordinate `w`, and sets the remaining coordinates of the block
//! `j..l` to `(a_j + ... + a_l) / (l - j)`; its weight is proportional to
//! `b_w = (a_j + ... + a_l) / (l - j) - a_w`. Repeating until every working
//! vector is `s`-sparse yields the decomposition.
//!
//! Signs ride along on the coordinates: the splitting only looks at
//! magnitudes, so flipping the sign of `v_i` flips coordinate `i` of every
//! output vector.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, DenseVector, Norm};

/// Relative slack on the membership test.
pub const MEMBERSHIP_TOL: f64 = 1e-12;
/// Relative tolerance used when checking a decomposition.
pub const DECOMPOSITION_TOL: f64 = 1e-10;
/// Children whose weight falls below this are dropped.
const WEIGHT_FLOOR: f64 = 1e-15;
/// Two working vectors on the same support are merged when their
/// magnitudes agree to this relative precision.
const MERGE_TOL: f64 = 1e-12;

/// Parameters `(alpha, s)` of the polytope `T(alpha, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    alpha: f64,
    s: usize,
}

impl PolytopeSpec {
    pub fn new(alpha: f64, s: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be positive and finite, got {alpha}")));
        }
        if s == 0 {
            return Err(Error::Domain("sparsity level s must be at least 1".into()));
        }
        Ok(Self { alpha, s })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn s(&self) -> usize {
        self.s
    }
}

/// `v = sum_i weights[i] * vectors[i]` with weights on the simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexCombination {
    weights: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

impl ConvexCombination {
    /// Builds a combination from raw terms. Only shape is checked here;
    /// use [`verify_combination`] for the full set of conditions.
    pub fn new(terms: Vec<(f64, DenseVector)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("a convex combination needs at least one term".into()));
        }
        let p = terms[0].1.len();
        if terms.iter().any(|(_, u)| u.len() != p) {
            return Err(Error::Shape("all vectors in a combination must share a length".into()));
        }
        let (weights, vectors) = terms.into_iter().map(|(w, u)| (w, u.into_vec())).unzip();
        Ok(Self { weights, vectors })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn terms(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.weights.iter().copied().zip(self.vectors.iter().map(Vec::as_slice))
    }

    /// `sum_i lambda_i u_i`.
    pub fn combine(&self) -> Vec<f64> {
        let p = self.vectors.first().map_or(0, Vec::len);
        let mut out = vec![0.0; p];
        for (w, u) in self.terms() {
            for (o, x) in out.iter_mut().zip(u) {
                *o += w * x;
            }
        }
        out
    }
}

pub fn is_member(v: &[f64], spec: &PolytopeSpec) -> bool {
    let cap = spec.alpha * (1.0 + MEMBERSHIP_TOL);
    norm(v, Norm::Linf) <= cap && norm(v, Norm::L1) <= spec.s as f64 * cap
}

/// A working vector: `(coordinate, magnitude)` pairs, magnitudes strictly
/// positive, sorted by decreasing magnitude with ties to the lower index.
#[derive(Clone, Debug)]
struct Working {
    entries: Vec<(usize, f64)>,
}

impl Working {
    fn sort(&mut self) {
        self.entries.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    }

    fn support_key(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self.entries.iter().map(|e| e.0).collect();
        idx.sort_unstable();
        idx
    }

    fn magnitudes_by_index(&self) -> Vec<(usize, f64)> {
        let mut e = self.entries.clone();
        e.sort_by_key(|x| x.0);
        e
    }

    /// One splitting step. Returns children with weights summing to one,
    /// each having exactly one fewer nonzero entry.
    fn split(&self, cap: f64) -> Result<Vec<(f64, Working)>> {
        let a: Vec<f64> = self.entries.iter().map(|e| e.1).collect();
        let l = a.len();
        // suffix[i] = a[i] + ... + a[l-1]  (0-based)
        let mut suffix = vec![0.0; l + 1];
        for i in (0..l).rev() {
            suffix[i] = suffix[i + 1] + a[i];
        }
        // largest 1-based j in [1, l-1] with a_j + ... + a_l <= (l - j) * alpha
        let j = (1..l)
            .rev()
            .find(|&j| suffix[j - 1] <= (l - j) as f64 * cap)
            .ok_or_else(|| Error::Internal(format!("no admissible split index for a {l}-sparse working vector")))?;
        let block = suffix[j - 1];
        let share = block / (l - j) as f64;

        let b: Vec<f64> = (j - 1..l).map(|w| (share - a[w]).max(0.0)).collect();
        let total: f64 = b.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Internal("splitting weights vanished".into()));
        }

        let mut children = Vec::with_capacity(b.len());
        for (offset, bw) in b.iter().enumerate() {
            let lambda = bw / total;
            if lambda < WEIGHT_FLOOR {
                continue;
            }
            let dropped = j - 1 + offset;
            let mut entries = Vec::with_capacity(l - 1);
            entries.extend_from_slice(&self.entries[..j - 1]);
            for (i, e) in self.entries.iter().enumerate().skip(j - 1) {
                if i != dropped {
                    entries.push((e.0, share));
                }
            }
            let mut child = Working { entries };
            child.sort();
            children.push((lambda, child));
        }
        let kept: f64 = children.iter().map(|c| c.0).sum();
        for c in &mut children {
            c.0 /= kept;
        }
        Ok(children)
    }
}

/// Working vectors at one sparsity level, grouped by support so that
/// coinciding branches are merged by adding their weights.
#[derive(Default)]
struct Level {
    groups: BTreeMap<Vec<usize>, Vec<(f64, Working)>>,
}

impl Level {
    fn insert(&mut self, weight: f64, node: Working) {
        let bucket = self.groups.entry(node.support_key()).or_default();
        let mags = node.magnitudes_by_index();
        for (w, existing) in bucket.iter_mut() {
            let same = existing
                .magnitudes_by_index()
                .iter()
                .zip(&mags)
                .all(|(x, y)| (x.1 - y.1).abs() <= MERGE_TOL * x.1.max(y.1));
            if same {
                *w += weight;
                return;
            }
        }
        bucket.push((weight, node));
    }

    fn into_nodes(self) -> impl Iterator<Item = (f64, Working)> {
        self.groups.into_values().flatten()
    }
}

/// Writes `v` as a convex combination of `s`-sparse vectors of the same
/// l1 norm, supported inside `supp(v)` and bounded by `alpha` in sup norm.
pub fn decompose(v: &DenseVector, spec: &PolytopeSpec) -> Result<ConvexCombination> {
    if !is_member(v, spec) {
        return Err(Error::NotMember { alpha: spec.alpha, s: spec.s });
    }
    let p = v.len();
    let mut root = Working {
        entries: v.iter().enumerate().filter(|(_, x)| **x != 0.0).map(|(i, x)| (i, x.abs())).collect(),
    };
    root.sort();

    let cap = spec.alpha * (1.0 + MEMBERSHIP_TOL);
    let mut sparsity = root.entries.len();
    let mut nodes = vec![(1.0, root)];
    while sparsity > spec.s {
        let mut next = Level::default();
        for (weight, node) in &nodes {
            for (lambda, child) in node.split(cap)? {
                if child.entries.len() != sparsity - 1 {
                    return Err(Error::Internal(format!(
                        "split of a {sparsity}-sparse vector produced a {}-sparse child",
                        child.entries.len()
                    )));
                }
                next.insert(weight * lambda, child);
            }
        }
        nodes = next.into_nodes().collect();
        sparsity -= 1;
    }

    let total: f64 = nodes.iter().map(|n| n.0).sum();
    let terms = nodes
        .into_iter()
        .map(|(w, node)| {
            let mut u = vec![0.0; p];
            for (i, mag) in node.entries {
                u[i] = mag.copysign(v[i]);
            }
            (w / total, DenseVector::from_vec_unchecked(u))
        })
        .collect();
    ConvexCombination::new(terms)
}

/// Checks every condition a decomposition of `v` over `T(alpha, s)` must meet.
pub fn verify_combination(v: &[f64], spec: &PolytopeSpec, comb: &ConvexCombination) -> bool {
    if comb.is_empty() {
        return false;
    }
    let weight_sum: f64 = comb.weights().iter().sum();
    if (weight_sum - 1.0).abs() > MEMBERSHIP_TOL {
        return false;
    }
    if comb.weights().iter().any(|w| !(0.0..=1.0 + MEMBERSHIP_TOL).contains(w)) {
        return false;
    }
    let v_l1 = norm(v, Norm::L1);
    let sup_cap = spec.alpha * (1.0 + DECOMPOSITION_TOL);
    for u in comb.vectors() {
        if u.len() != v.len() {
            return false;
        }
        let outside_support = u.iter().zip(v).any(|(ui, vi)| *ui != 0.0 && *vi == 0.0);
        if outside_support
            || norm(u, Norm::L0) > spec.s as f64
            || (norm(u, Norm::L1) - v_l1).abs() > DECOMPOSITION_TOL * v_l1
            || norm(u, Norm::Linf) > sup_cap
        {
            return false;
        }
    }
    let recon = comb.combine();
    let err = recon.iter().zip(v).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    err <= DECOMPOSITION_TOL * norm(v, Norm::Linf)
}
