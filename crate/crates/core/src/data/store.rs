use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{norm, Mat64};

/// Identity of one feature row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub image_id: String,
    pub concept_id: i64,
    pub class_id: Option<i64>,
}

/// An `N x d` matrix of unit-norm image features with a row-aligned manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStore {
    features: Mat64,
    manifest: Vec<ManifestEntry>,
}

impl FeatureStore {
    /// Builds a store, L2-normalizing every row.
    pub fn new(mut features: Mat64, manifest: Vec<ManifestEntry>) -> Result<Self> {
        if manifest.len() != features.rows() {
            return Err(Error::format(format!(
                "manifest has {} entries but feature matrix has {} rows",
                manifest.len(),
                features.rows()
            )));
        }
        for r in 0..features.rows() {
            let row = features.row_mut(r);
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::format_at(r, "non-finite feature value"));
            }
            let n = norm(row);
            if n == 0.0 {
                return Err(Error::format_at(r, "zero-norm feature row"));
            }
            row.iter_mut().for_each(|x| *x /= n);
        }
        Ok(FeatureStore { features, manifest })
    }

    pub fn len(&self) -> usize {
        self.features.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn features(&self) -> &Mat64 {
        &self.features
    }

    pub fn manifest(&self) -> &[ManifestEntry] {
        &self.manifest
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    pub fn entry(&self, i: usize) -> &ManifestEntry {
        &self.manifest[i]
    }

    pub fn concept(&self, i: usize) -> i64 {
        self.manifest[i].concept_id
    }

    pub fn class(&self, i: usize) -> Option<i64> {
        self.manifest[i].class_id
    }

    /// Row indices grouped by concept id, in ascending concept order.
    pub fn rows_by_concept(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut map: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, e) in self.manifest.iter().enumerate() {
            map.entry(e.concept_id).or_default().push(i);
        }
        map
    }

    pub fn n_concepts(&self) -> usize {
        self.rows_by_concept().len()
    }

    pub fn n_classes(&self) -> usize {
        let mut classes: Vec<i64> = self.manifest.iter().filter_map(|e| e.class_id).collect();
        classes.sort_unstable();
        classes.dedup();
        classes.len()
    }
}
