//! File-based experiment runner: configuration, the pipeline commands
//! (generate, train, analyze, probe, render, report), the run ledger, and
//! greymap rendering.

mod commands;
mod config;
mod ledger;
mod pgm;

pub use commands::{
    analysis_probe, cmd_analyze, cmd_gen_data, cmd_probe, cmd_render_noise, cmd_report,
    cmd_train, curve_csv, exit, load_config, load_store, noise_vector, read_vector_file,
    AnalyzeSummary, CliError, GenDataSummary, NoiseSource, Overrides, ProbeSummary, RunRecord,
    SubgroupReports, SwapReport,
};
pub use config::{AnalysisOptions, DataConfig, DataSource, ExperimentConfig};
pub use ledger::{summarize, LedgerRecord, LedgerSummary, MeanAlignment, RunLedger};
pub use pgm::{decode_pgm, encode_pgm, grid_shape, render_pgm, scale_to_bytes};
