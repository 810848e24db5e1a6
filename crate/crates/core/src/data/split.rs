use serde::{Deserialize, Serialize};

use crate::data::FeatureStore;
use crate::numerics::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    /// Held-out rows per concept, used for RSA probes and test games.
    pub test_per_concept: usize,
    /// Rows per concept reserved for the fixed validation pairs.
    pub validation_per_concept: usize,
    /// Seed of the partition, shared by every run of an experiment.
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            test_per_concept: 10,
            validation_per_concept: 10,
            seed: 0,
        }
    }
}

/// Disjoint row partitions of a store.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

/// Partitions each concept's rows into test, validation and train.
///
/// Every concept keeps at least two training rows when it has them; the
/// held-out quotas shrink for concepts too small to fill them. Each list is
/// returned sorted.
pub fn split_store(store: &FeatureStore, cfg: &SplitConfig, rng: &mut RngStream) -> SplitSpec {
    let mut split = SplitSpec {
        train: Vec::new(),
        validation: Vec::new(),
        test: Vec::new(),
    };
    for (_, mut rows) in store.rows_by_concept() {
        // Fisher-Yates
        for i in (1..rows.len()).rev() {
            let j = rng.below(i + 1);
            rows.swap(i, j);
        }
        let spare = rows.len().saturating_sub(2);
        let n_test = cfg.test_per_concept.min(spare);
        let n_val = cfg.validation_per_concept.min(spare - n_test);
        split.test.extend_from_slice(&rows[..n_test]);
        split.validation.extend_from_slice(&rows[n_test..n_test + n_val]);
        split.train.extend_from_slice(&rows[n_test + n_val..]);
    }
    split.train.sort_unstable();
    split.validation.sort_unstable();
    split.test.sort_unstable();
    split
}
