use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feature rows with one label each. `groups[i]` identifies the polytope a
/// row was derived from, so augmented copies can be kept on one side of a split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    pub groups: Vec<u64>,
}

impl Dataset {
    /// Each row is its own group.
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        let groups = (0..features.len() as u64).collect();
        Self::with_groups(features, labels, groups)
    }

    pub fn with_groups(features: Vec<Vec<f64>>, labels: Vec<f64>, groups: Vec<u64>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::Config("dataset is empty".into()));
        }
        if labels.len() != features.len() {
            return Err(Error::ShapeMismatch { expected: features.len(), got: labels.len() });
        }
        if groups.len() != features.len() {
            return Err(Error::ShapeMismatch { expected: features.len(), got: groups.len() });
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(Error::Config("feature rows are empty".into()));
        }
        if let Some(row) = features.iter().find(|r| r.len() != dim) {
            return Err(Error::ShapeMismatch { expected: dim, got: row.len() });
        }
        if features.iter().flatten().chain(&labels).any(|v| !v.is_finite()) {
            return Err(Error::Config("dataset contains non-finite values".into()));
        }
        Ok(Self { features, labels, groups })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::with_groups(
            indices.iter().map(|&i| self.features[i].clone()).collect(),
            indices.iter().map(|&i| self.labels[i]).collect(),
            indices.iter().map(|&i| self.groups[i]).collect(),
        )
    }

    /// `max - min` of the labels.
    pub fn label_range(&self) -> f64 {
        let (lo, hi) =
            self.labels.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)));
        hi - lo
    }
}
