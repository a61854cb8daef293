use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite real vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DenseVector(Vec<f64>);

/// Vector norms used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    /// Number of entries with `|v_i| > 0`. No tolerance is applied.
    L0,
    L1,
    L2,
    Linf,
}

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("vector entry {i} is {}", entries[i])));
        }
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// Wraps entries produced by finite arithmetic on finite inputs.
    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        debug_assert!(entries.iter().all(|x| x.is_finite()));
        Self(entries)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self, which: Norm) -> f64 {
        norm(&self.0, which)
    }

    /// Support of the vector (exact nonzero test).
    pub fn support(&self) -> SupportSet {
        SupportSet {
            indices: self
                .0
                .iter()
                .enumerate()
                .filter(|(_, x)| **x != 0.0)
                .map(|(i, _)| i)
                .collect(),
        }
    }
}

impl Deref for DenseVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for DenseVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DenseVector> for Vec<f64> {
    fn from(v: DenseVector) -> Vec<f64> {
        v.0
    }
}

pub fn norm(v: &[f64], which: Norm) -> f64 {
    match which {
        Norm::L0 => v.iter().filter(|x| **x != 0.0).count() as f64,
        Norm::L1 => v.iter().map(|x| x.abs()).sum(),
        Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        Norm::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Strictly increasing list of coordinate indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    pub fn new(indices: Vec<usize>, dimension: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Range("support indices must be strictly increasing".into()));
        }
        if let Some(&last) = indices.last() {
            if last >= dimension {
                return Err(Error::Range(format!(
                    "support index {last} out of range for dimension {dimension}"
                )));
            }
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

/// Order of coordinates by decreasing magnitude, ties broken by lower index.
pub(crate) fn magnitude_order(v: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b)));
    order
}

/// Splits `v` into its `k` largest-magnitude entries and the remainder.
///
/// Ties in magnitude go to the lower index. `head + tail == v` holds exactly
/// because every coordinate is copied into exactly one of the two outputs.
pub fn top_k_truncate(v: &DenseVector, k: usize) -> Result<(DenseVector, DenseVector)> {
    if k > v.len() {
        return Err(Error::Range(format!("k = {k} exceeds vector length {}", v.len())));
    }
    let mut head = vec![0.0; v.len()];
    let mut tail = v.as_slice().to_vec();
    for &i in magnitude_order(v).iter().take(k) {
        head[i] = v[i];
        tail[i] = 0.0;
    }
    Ok((DenseVector(head), DenseVector(tail)))
}
