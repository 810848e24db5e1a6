use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{average_ranks, dot, norm, pearson, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsaResult {
    pub rho: f64,
    pub n_items: usize,
    pub n_pairs: usize,
}

pub fn n_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Cosines over all unordered pairs `(i, j)`, `i < j`, with `i` as the
/// outer index.
pub fn pairwise_cosines<R: AsRef<[f64]>>(reps: &[R]) -> Result<Vec<f64>> {
    let mut units = Vec::with_capacity(reps.len());
    for (i, r) in reps.iter().enumerate() {
        let r = r.as_ref();
        let n = norm(r);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateVector(format!("representation of item {i} has norm {n}")));
        }
        units.push(r.iter().map(|x| x / n).collect::<Vec<f64>>());
    }
    if let Some(first) = units.first() {
        if let Some(i) = units.iter().position(|u| u.len() != first.len()) {
            return Err(Error::Dimension {
                expected: first.len(),
                got: units[i].len(),
                context: "representation length within one space",
            });
        }
    }
    let mut sims = Vec::with_capacity(n_pairs(units.len()));
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            sims.push(dot(&units[i], &units[j]).clamp(-1.0, 1.0));
        }
    }
    Ok(sims)
}

/// Pairwise similarities of one space with their ranks, so a space that is
/// compared many times (the input space along a training curve) is ranked
/// once.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityProfile {
    pub n_items: usize,
    pub sims: Vec<f64>,
    ranks: Vec<f64>,
}

impl SimilarityProfile {
    pub fn new<R: AsRef<[f64]>>(reps: &[R]) -> Result<Self> {
        let sims = pairwise_cosines(reps)?;
        let ranks = average_ranks(&sims);
        Ok(SimilarityProfile {
            n_items: reps.len(),
            sims,
            ranks,
        })
    }

    /// Spearman correlation between two profiles of the same items.
    pub fn rsa(&self, other: &SimilarityProfile) -> Result<RsaResult> {
        if self.n_items != other.n_items {
            return Err(Error::Dimension {
                expected: self.n_items,
                got: other.n_items,
                context: "RSA item count",
            });
        }
        if self.n_items < 3 {
            return Err(Error::Parameter(format!("RSA needs at least 3 items, got {}", self.n_items)));
        }
        Ok(RsaResult {
            rho: pearson(&self.ranks, &other.ranks)?,
            n_items: self.n_items,
            n_pairs: self.sims.len(),
        })
    }
}

/// Spearman correlation between the pairwise-cosine structures of two
/// index-aligned collections. The two collections may live in spaces of
/// different dimensionality.
pub fn rsa_score<A: AsRef<[f64]>, B: AsRef<[f64]>>(reps1: &[A], reps2: &[B]) -> Result<RsaResult> {
    if reps1.len() != reps2.len() {
        return Err(Error::Dimension {
            expected: reps1.len(),
            got: reps2.len(),
            context: "RSA collections",
        });
    }
    SimilarityProfile::new(reps1)?.rsa(&SimilarityProfile::new(reps2)?)
}

/// Deterministic probe subset: `size` rows drawn without replacement, then
/// sorted into canonical order.
pub fn select_probe(rows: &[usize], size: usize, rng: &mut RngStream) -> Vec<usize> {
    let mut pool = rows.to_vec();
    let k = size.min(pool.len());
    for i in 0..k {
        let j = i + rng.below(pool.len() - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool.sort_unstable();
    pool
}
