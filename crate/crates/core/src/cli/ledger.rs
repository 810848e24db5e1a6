use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::GameMode;
use crate::error::{Error, Result};

/// One completed training seed. Paths are relative to the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerRecord {
    pub seed: u64,
    pub mode: GameMode,
    pub success: bool,
    pub final_mvr: f64,
    pub rho_sr: f64,
    pub rho_si: f64,
    pub rho_ri: f64,
    pub checkpoint: String,
    pub curve: String,
    pub run: String,
}

/// JSON-lines ledger of completed seeds, one record per seed.
pub struct RunLedger;

impl RunLedger {
    /// Appends `records`, first dropping older records for the same seeds so
    /// a retrained seed never appears twice.
    pub fn record(path: &Path, records: &[LedgerRecord]) -> Result<()> {
        let mut kept = match fs::metadata(path) {
            Ok(_) => Self::read(path)?,
            Err(_) => Vec::new(),
        };
        let before = kept.len();
        kept.retain(|old| records.iter().all(|r| r.seed != old.seed));
        if kept.len() != before {
            let mut text = String::new();
            for r in &kept {
                text.push_str(&serde_json::to_string(r)?);
                text.push('\n');
            }
            fs::write(path, text).map_err(|e| Error::io(path, e))?;
        }
        for r in records {
            Self::append(path, r)?;
        }
        Ok(())
    }

    pub fn append(path: &Path, record: &LedgerRecord) -> Result<()> {
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        f.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Vec<LedgerRecord>> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| Error::format(format!("ledger line {}: {e}", i + 1)))
            })
            .collect()
    }
}

/// Aggregate over ledger records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerSummary {
    pub seeds: usize,
    pub successes: usize,
    pub mean_final_mvr: f64,
    /// Averaged over successful seeds, if any.
    pub success_alignment: Option<MeanAlignment>,
    /// Averaged over failing seeds, if any.
    pub failure_alignment: Option<MeanAlignment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanAlignment {
    pub rho_sr: f64,
    pub rho_si: f64,
    pub rho_ri: f64,
}

pub fn summarize(records: &[LedgerRecord]) -> LedgerSummary {
    let mean_triple = |success: bool| -> Option<MeanAlignment> {
        let rs: Vec<&LedgerRecord> = records.iter().filter(|r| r.success == success).collect();
        if rs.is_empty() {
            return None;
        }
        let n = rs.len() as f64;
        Some(MeanAlignment {
            rho_sr: rs.iter().map(|r| r.rho_sr).sum::<f64>() / n,
            rho_si: rs.iter().map(|r| r.rho_si).sum::<f64>() / n,
            rho_ri: rs.iter().map(|r| r.rho_ri).sum::<f64>() / n,
        })
    };
    LedgerSummary {
        seeds: records.len(),
        successes: records.iter().filter(|r| r.success).count(),
        mean_final_mvr: if records.is_empty() {
            0.0
        } else {
            records.iter().map(|r| r.final_mvr).sum::<f64>() / records.len() as f64
        },
        success_alignment: mean_triple(true),
        failure_alignment: mean_triple(false),
    }
}
