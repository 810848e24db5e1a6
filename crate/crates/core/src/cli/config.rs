use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::EvalProtocol;
use crate::data::SyntheticConfig;
use crate::error::{Error, Result};
use crate::training::TrainConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataSource {
    Synthetic,
    Lfs1,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    pub source: DataSource,
    /// Input file for `lfs1` and `csv` sources.
    pub path: Option<PathBuf>,
    pub synthetic: SyntheticConfig,
    /// Seed of the synthetic generator.
    pub seed: u64,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            source: DataSource::Synthetic,
            path: None,
            synthetic: SyntheticConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    /// Held-out rows used for RSA and subgroup scores.
    pub probe_size: usize,
    pub top_k: usize,
    pub swap_pairs: usize,
    pub swap_runs: usize,
    pub eval: EvalProtocol,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            probe_size: 500,
            top_k: 10,
            swap_pairs: 1000,
            swap_runs: 10,
            eval: EvalProtocol::default(),
            seed: 0,
        }
    }
}

/// One experiment: where the features come from, how to train, what to
/// measure, and where to write.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub output_dir: PathBuf,
    pub seeds: usize,
    pub data: DataConfig,
    pub train: TrainConfig,
    pub analysis: AnalysisOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            output_dir: PathBuf::from("runs/default"),
            seeds: 1,
            data: DataConfig::default(),
            train: TrainConfig::default(),
            analysis: AnalysisOptions::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds == 0 {
            return Err(Error::Config("seeds must be at least 1".into()));
        }
        match self.data.source {
            DataSource::Synthetic => {
                self.data.synthetic.validate()?;
                if self.data.synthetic.dim != self.train.dim {
                    return Err(Error::Config(format!(
                        "synthetic dim {} differs from train dim {}",
                        self.data.synthetic.dim, self.train.dim
                    )));
                }
            }
            DataSource::Lfs1 | DataSource::Csv => {
                if self.data.path.is_none() {
                    return Err(Error::Config("data.path is required for lfs1 and csv sources".into()));
                }
            }
        }
        self.train.validate()?;
        let a = &self.analysis;
        if a.probe_size < 3 || a.top_k == 0 || a.swap_pairs == 0 || a.swap_runs == 0 {
            return Err(Error::Config(
                "analysis sizes must be positive (probe_size >= 3)".into(),
            ));
        }
        if a.eval.runs == 0 || a.eval.batches == 0 || a.eval.batch_size == 0 {
            return Err(Error::Config("analysis.eval sizes must be positive".into()));
        }
        Ok(())
    }

    /// The LFS1 file training and analysis read.
    pub fn store_path(&self) -> PathBuf {
        match (self.data.source, &self.data.path) {
            (DataSource::Lfs1, Some(p)) => p.clone(),
            _ => self.output_dir.join("features.lfs1"),
        }
    }

    pub fn ledger_path(&self) -> PathBuf {
        self.output_dir.join("ledger.jsonl")
    }

    pub fn seed_dir(&self, seed: u64) -> PathBuf {
        self.output_dir.join(format!("seed_{seed:03}"))
    }
}
