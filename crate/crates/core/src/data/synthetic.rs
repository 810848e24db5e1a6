use serde::{Deserialize, Serialize};

use crate::data::{FeatureStore, ManifestEntry};
use crate::error::{Error, Result};
use crate::numerics::{Mat64, RngStream};

/// Hierarchical Gaussian feature generator: classes contain concepts,
/// concepts contain images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub n_classes: usize,
    pub concepts_per_class: usize,
    pub images_per_concept: usize,
    pub dim: usize,
    pub class_spread: f64,
    pub concept_spread: f64,
    pub image_spread: f64,
    /// Clamp features at zero before normalization, mimicking ReLU activations.
    pub clamp_nonnegative: bool,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_classes: 5,
            concepts_per_class: 10,
            images_per_concept: 100,
            dim: 64,
            class_spread: 1.0,
            concept_spread: 0.5,
            image_spread: 0.3,
            clamp_nonnegative: false,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n_classes", self.n_classes),
            ("concepts_per_class", self.concepts_per_class),
            ("images_per_concept", self.images_per_concept),
            ("dim", self.dim),
        ] {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        for (name, v) in [
            ("class_spread", self.class_spread),
            ("concept_spread", self.concept_spread),
            ("image_spread", self.image_spread),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn n_concepts(&self) -> usize {
        self.n_classes * self.concepts_per_class
    }

    pub fn n_rows(&self) -> usize {
        self.n_concepts() * self.images_per_concept
    }
}

pub fn generate_synthetic_features(cfg: &SyntheticConfig, rng: &mut RngStream) -> Result<FeatureStore> {
    cfg.validate()?;
    let d = cfg.dim;
    let draw = |center: &[f64], spread: f64, rng: &mut RngStream| -> Vec<f64> {
        center
            .iter()
            .map(|c| c + spread * rng.standard_normal())
            .collect()
    };
    let origin = vec![0.0; d];

    let mut data = Vec::with_capacity(cfg.n_rows() * d);
    let mut manifest = Vec::with_capacity(cfg.n_rows());
    for class in 0..cfg.n_classes {
        let class_mean = draw(&origin, cfg.class_spread, rng);
        for k in 0..cfg.concepts_per_class {
            let concept = class * cfg.concepts_per_class + k;
            let concept_mean = draw(&class_mean, cfg.concept_spread, rng);
            for img in 0..cfg.images_per_concept {
                let mut x = draw(&concept_mean, cfg.image_spread, rng);
                if cfg.clamp_nonnegative {
                    x.iter_mut().for_each(|v| *v = v.max(0.0));
                }
                data.extend(x);
                manifest.push(ManifestEntry {
                    image_id: format!("c{concept:04}_i{img:04}"),
                    concept_id: concept as i64,
                    class_id: Some(class as i64),
                });
            }
        }
    }
    let features = Mat64::from_vec(manifest.len(), d, data)?;
    FeatureStore::new(features, manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{cosine, Stream};

    #[test]
    fn tiny_config_shape() {
        let cfg = SyntheticConfig {
            n_classes: 1,
            concepts_per_class: 1,
            images_per_concept: 2,
            ..Default::default()
        };
        let s = generate_synthetic_features(&cfg, &mut RngStream::named(0, Stream::Data)).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.concept(0), s.concept(1));
    }

    #[test]
    fn vanishing_image_spread_collapses_concept() {
        let cfg = SyntheticConfig {
            n_classes: 2,
            concepts_per_class: 2,
            images_per_concept: 3,
            image_spread: 1e-13,
            ..Default::default()
        };
        let s = generate_synthetic_features(&cfg, &mut RngStream::named(1, Stream::Data)).unwrap();
        for (_, rows) in s.rows_by_concept() {
            for &a in &rows {
                for &b in &rows {
                    assert!((cosine(s.row(a), s.row(b)).unwrap() - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = SyntheticConfig {
            image_spread: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = SyntheticConfig {
            n_classes: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn clamp_gives_nonnegative_rows() {
        let cfg = SyntheticConfig {
            n_classes: 2,
            concepts_per_class: 2,
            images_per_concept: 2,
            clamp_nonnegative: true,
            ..Default::default()
        };
        let s = generate_synthetic_features(&cfg, &mut RngStream::named(2, Stream::Data)).unwrap();
        assert!(s.features().as_slice().iter().all(|&x| x >= 0.0));
    }
}
