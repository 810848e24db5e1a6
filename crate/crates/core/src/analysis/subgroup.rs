use serde::{Deserialize, Serialize};

use crate::analysis::pairwise_cosines;
use crate::data::ManifestEntry;
use crate::error::{Error, Result};
use crate::numerics::mean_std;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Input,
    Sender,
    Receiver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grouping {
    Concept,
    Class,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupSimilarityReport {
    pub space: Space,
    pub grouping: Grouping,
    pub mean_z_within: f64,
    pub within_pairs: usize,
    pub total_pairs: usize,
}

/// Pairwise cosines standardized by their own population mean and
/// (population) standard deviation, in canonical pair order.
pub fn z_normalized_similarities<R: AsRef<[f64]>>(reps: &[R]) -> Result<Vec<f64>> {
    let sims = pairwise_cosines(reps)?;
    if sims.is_empty() {
        return Err(Error::Grouping("need at least 2 items".into()));
    }
    let (mean, std) = mean_std(&sims);
    if std == 0.0 {
        return Err(Error::Grouping("all pairwise similarities are equal".into()));
    }
    Ok(sims.iter().map(|s| (s - mean) / std).collect())
}

pub fn labels_for(manifest: &[ManifestEntry], rows: &[usize], grouping: Grouping) -> Result<Vec<i64>> {
    rows.iter()
        .map(|&r| match grouping {
            Grouping::Concept => Ok(manifest[r].concept_id),
            Grouping::Class => manifest[r]
                .class_id
                .ok_or_else(|| Error::Grouping(format!("row {r} has no class id"))),
        })
        .collect()
}

/// Mean z-normalized similarity over the pairs whose items share a label.
pub fn z_subgroup_similarity<R: AsRef<[f64]>>(
    reps: &[R],
    labels: &[i64],
    space: Space,
    grouping: Grouping,
) -> Result<SubgroupSimilarityReport> {
    if labels.len() != reps.len() {
        return Err(Error::Dimension {
            expected: reps.len(),
            got: labels.len(),
            context: "group labels",
        });
    }
    let n = reps.len();
    let mut mask = Vec::with_capacity(crate::analysis::n_pairs(n));
    for i in 0..n {
        for j in i + 1..n {
            mask.push(labels[i] == labels[j]);
        }
    }
    let n_within = mask.iter().filter(|m| **m).count();
    if n_within == 0 {
        return Err(Error::Grouping("every item is alone in its group".into()));
    }
    if n_within == mask.len() {
        return Err(Error::Grouping("all items share one group".into()));
    }
    let z = z_normalized_similarities(reps)?;
    let within: Vec<f64> = z.iter().zip(&mask).filter(|(_, m)| **m).map(|(z, _)| *z).collect();
    Ok(SubgroupSimilarityReport {
        space,
        grouping,
        mean_z_within: within.iter().sum::<f64>() / within.len() as f64,
        within_pairs: within.len(),
        total_pairs: mask.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tight_clusters_score_positive() {
        let reps = vec![
            vec![1.0, 0.01],
            vec![1.0, -0.01],
            vec![0.01, 1.0],
            vec![-0.01, 1.0],
        ];
        let r = z_subgroup_similarity(&reps, &[0, 0, 1, 1], Space::Input, Grouping::Concept).unwrap();
        assert!(r.mean_z_within > 0.0);
        assert_eq!((r.within_pairs, r.total_pairs), (2, 6));
    }

    #[test]
    fn degenerate_groupings_rejected() {
        let reps = vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]];
        assert!(matches!(
            z_subgroup_similarity(&reps, &[1, 1, 1], Space::Input, Grouping::Class),
            Err(Error::Grouping(_))
        ));
        assert!(matches!(
            z_subgroup_similarity(&reps, &[1, 2, 3], Space::Input, Grouping::Class),
            Err(Error::Grouping(_))
        ));
    }

    #[test]
    fn population_z_has_zero_mean() {
        let reps: Vec<Vec<f64>> = (0..12)
            .map(|i| vec![(i as f64).sin(), (i as f64 * 1.7).cos(), 0.3 + i as f64 * 0.01])
            .collect();
        let z = z_normalized_similarities(&reps).unwrap();
        assert!((z.iter().sum::<f64>() / z.len() as f64).abs() < 1e-9);
    }
}
