use serde::{Deserialize, Serialize};

use crate::data::{GameMode, SplitConfig};
use crate::error::{Error, Result};
use crate::training::OptimizerKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub vocab_size: usize,
    pub hidden: usize,
    pub dim: usize,
    pub batch_size: usize,
    pub total_batches: u64,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub baseline_decay: f64,
    pub entropy_bonus: f64,
    pub temperature: f64,
    pub validation_every: u64,
    pub validation_pairs: usize,
    /// Test rows embedded for the RSA triple on each curve point.
    pub curve_probe_size: usize,
    pub mode: GameMode,
    pub seed: u64,
    pub split: SplitConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            vocab_size: 100,
            hidden: 50,
            dim: 64,
            batch_size: 32,
            total_batches: 50_000,
            learning_rate: 0.001,
            optimizer: OptimizerKind::adam(),
            baseline_decay: 0.99,
            entropy_bonus: 0.0,
            temperature: 1.0,
            validation_every: 100,
            validation_pairs: 1024,
            curve_probe_size: 200,
            mode: GameMode::SameImage,
            seed: 0,
            split: SplitConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("vocab_size", self.vocab_size),
            ("hidden", self.hidden),
            ("dim", self.dim),
            ("batch_size", self.batch_size),
            ("validation_every", self.validation_every as usize),
            ("validation_pairs", self.validation_pairs),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!("learning_rate {}", self.learning_rate)));
        }
        if !(self.baseline_decay > 0.0 && self.baseline_decay <= 1.0) {
            return Err(Error::Config(format!(
                "baseline_decay must lie in (0, 1], got {}",
                self.baseline_decay
            )));
        }
        if !(self.entropy_bonus >= 0.0 && self.entropy_bonus.is_finite()) {
            return Err(Error::Config(format!("entropy_bonus {}", self.entropy_bonus)));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::Config(format!("temperature {}", self.temperature)));
        }
        if self.mode == GameMode::Noise {
            return Err(Error::Config("training mode must be same-image or different-image".into()));
        }
        Ok(())
    }
}
