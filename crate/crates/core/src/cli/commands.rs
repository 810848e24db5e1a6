use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agents::{sha256_hex, Checkpoint};
use crate::analysis::{
    alignment_from_reps, cross_eval, embed_probe, labels_for, probe_id, select_probe,
    shift_pairs, swap_test, top_shift_pairs, z_subgroup_similarity, AlignmentReport,
    CrossEvalTable, Grouping, Space, SubgroupSimilarityReport, SwapTestResult,
};
use crate::cli::ledger::{summarize, LedgerRecord, LedgerSummary, RunLedger};
use crate::cli::pgm::render_pgm;
use crate::cli::{DataSource, ExperimentConfig};
use crate::data::{
    generate_synthetic_features, load_feature_csv, load_feature_store, save_feature_store,
    split_store, FeatureStore, GameMode,
};
use crate::error::{Error, Result};
use crate::numerics::{l2_normalize, RngStream, Stream};
use crate::training::{run_seed_sweep, TrainConfig, TrainRunResult, ValidationRecord};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const IO: i32 = 3;
    pub const ALL_SEEDS_FAILED: i32 = 4;
    pub const DIMENSION: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("all {seeds} seeds failed to reach the success threshold")]
    AllSeedsFailed { seeds: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::AllSeedsFailed { .. } => exit::ALL_SEEDS_FAILED,
            CliError::Lib(e) => match e {
                Error::Io { .. } | Error::Format { .. } | Error::Json(_) => exit::IO,
                Error::Dimension { .. } => exit::DIMENSION,
                _ => exit::CONFIG,
            },
        }
    }
}

/// Command-line flags that override config fields.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub seeds: Option<usize>,
    pub mode: Option<GameMode>,
    pub out: Option<PathBuf>,
    pub probe_size: Option<usize>,
}

impl ExperimentConfig {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.train.seed = s;
        }
        if let Some(n) = o.seeds {
            self.seeds = n;
        }
        if let Some(m) = o.mode {
            self.train.mode = m;
        }
        if let Some(out) = &o.out {
            self.output_dir = out.clone();
        }
        if let Some(p) = o.probe_size {
            self.analysis.probe_size = p;
        }
    }
}

/// Loads and validates a config (defaults when `path` is `None`).
pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg = match path {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    cfg.apply(overrides);
    cfg.validate()?;
    Ok(cfg)
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn relative(cfg: &ExperimentConfig, path: &Path) -> String {
    path.strip_prefix(&cfg.output_dir)
        .unwrap_or(path)
        .to_string_lossy()
        .replace('\\', "/")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenDataSummary {
    pub path: PathBuf,
    pub rows: usize,
    pub dim: usize,
    pub concepts: usize,
    pub classes: usize,
    pub warnings: Vec<String>,
}

pub fn cmd_gen_data(cfg: &ExperimentConfig) -> Result<GenDataSummary> {
    create_dir(&cfg.output_dir)?;
    let path = cfg.store_path();
    let store = match cfg.data.source {
        DataSource::Synthetic => {
            let store = generate_synthetic_features(
                &cfg.data.synthetic,
                &mut RngStream::named(cfg.data.seed, Stream::Data),
            )?;
            save_feature_store(&store, &path)?;
            store
        }
        DataSource::Csv => {
            let store = load_feature_csv(cfg.data.path.as_deref().expect("validated"))?;
            save_feature_store(&store, &path)?;
            store
        }
        DataSource::Lfs1 => load_feature_store(&path)?,
    };
    let mut warnings = Vec::new();
    if cfg.train.mode == GameMode::DifferentImage {
        if let Some((c, _)) = store.rows_by_concept().iter().find(|(_, rows)| rows.len() < 2) {
            warnings.push(format!(
                "concept {c} has a single image; different-image games will fail on this store"
            ));
        }
    }
    Ok(GenDataSummary {
        path,
        rows: store.len(),
        dim: store.dim(),
        concepts: store.n_concepts(),
        classes: store.n_classes(),
        warnings,
    })
}

/// The store an experiment trains and analyzes on.
pub fn load_store(cfg: &ExperimentConfig) -> Result<FeatureStore> {
    load_feature_store(&cfg.store_path())
}

fn check_store_dim(store: &FeatureStore, dim: usize) -> Result<()> {
    if store.dim() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: store.dim(),
            context: "feature store dimensionality",
        });
    }
    Ok(())
}

fn test_rows(cfg: &ExperimentConfig, store: &FeatureStore) -> Vec<usize> {
    let split = split_store(
        store,
        &cfg.train.split,
        &mut RngStream::named(cfg.train.split.seed, Stream::Split),
    );
    if split.test.len() >= 3 {
        split.test
    } else {
        (0..store.len()).collect()
    }
}

/// Held-out rows scored by RSA and subgroup analyses.
pub fn analysis_probe(cfg: &ExperimentConfig, store: &FeatureStore) -> Vec<usize> {
    select_probe(
        &test_rows(cfg, store),
        cfg.analysis.probe_size,
        &mut RngStream::named(cfg.analysis.seed, Stream::Probe),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: TrainConfig,
    pub success: bool,
    pub final_mvr: f64,
    pub batches_trained: u64,
    pub checkpoint_sha256: String,
    pub alignment: AlignmentReport,
}

pub fn curve_csv(curve: &[ValidationRecord]) -> String {
    let mut out = String::from("batch,mvr,rsa_sr,rsa_si,rsa_ri\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in curve {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.batch,
            r.mvr,
            opt(r.rsa_sr),
            opt(r.rsa_si),
            opt(r.rsa_ri)
        ));
    }
    out
}

fn persist_run(
    cfg: &ExperimentConfig,
    store: &FeatureStore,
    probe: &[usize],
    run: &TrainRunResult,
) -> Result<LedgerRecord> {
    let dir = cfg.seed_dir(run.seed);
    create_dir(&dir)?;
    let ck = Checkpoint::new(run.sender.clone(), run.receiver.clone(), run.seed, run.mode, run.batches_trained);
    let bytes = ck.encode()?;
    let ck_path = dir.join("checkpoint.lgck");
    fs::write(&ck_path, &bytes).map_err(|e| Error::io(&ck_path, e))?;
    let curve_path = dir.join("curve.csv");
    fs::write(&curve_path, curve_csv(&run.curve)).map_err(|e| Error::io(&curve_path, e))?;

    let reps = embed_probe(store, &run.sender, &run.receiver, probe)?;
    let mut alignment = alignment_from_reps(&reps.input, &reps.sender, &reps.receiver)?;
    alignment.probe_id = probe_id(probe);
    alignment.checkpoint_id = Some(sha256_hex(&bytes));
    let run_path = dir.join("run.json");
    write_json(
        &run_path,
        &RunRecord {
            config: TrainConfig {
                seed: run.seed,
                ..cfg.train.clone()
            },
            success: run.success,
            final_mvr: run.final_mvr,
            batches_trained: run.batches_trained,
            checkpoint_sha256: sha256_hex(&bytes),
            alignment: alignment.clone(),
        },
    )?;
    Ok(LedgerRecord {
        seed: run.seed,
        mode: run.mode,
        success: run.success,
        final_mvr: run.final_mvr,
        rho_sr: alignment.rho_sr,
        rho_si: alignment.rho_si,
        rho_ri: alignment.rho_ri,
        checkpoint: relative(cfg, &ck_path),
        curve: relative(cfg, &curve_path),
        run: relative(cfg, &run_path),
    })
}

/// Trains every configured seed, persisting checkpoints, curves, run
/// metadata and ledger rows.
pub fn cmd_train(cfg: &ExperimentConfig) -> std::result::Result<Vec<LedgerRecord>, CliError> {
    let store = load_store(cfg)?;
    check_store_dim(&store, cfg.train.dim)?;
    create_dir(&cfg.output_dir)?;
    let runs = run_seed_sweep(&cfg.train, &store, cfg.seeds)?;
    let probe = analysis_probe(cfg, &store);
    let mut records = Vec::with_capacity(runs.len());
    for run in &runs {
        records.push(persist_run(cfg, &store, &probe, run)?);
    }
    RunLedger::record(&cfg.ledger_path(), &records)?;
    if !records.iter().any(|r| r.success) {
        return Err(CliError::AllSeedsFailed { seeds: records.len() });
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupReports {
    pub checkpoint_id: String,
    pub probe_id: String,
    pub reports: Vec<SubgroupSimilarityReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeSummary {
    pub dir: PathBuf,
    pub alignment: AlignmentReport,
    pub subgroups: Vec<SubgroupSimilarityReport>,
}

fn load_checkpoint(path: &Path) -> Result<(Checkpoint, String)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok((Checkpoint::decode(&bytes)?, sha256_hex(&bytes)))
}

/// RSA alignment, subgroup similarities in all three spaces, and pair dumps
/// for one checkpoint.
pub fn cmd_analyze(cfg: &ExperimentConfig, checkpoint: &Path) -> Result<AnalyzeSummary> {
    let (ck, ck_id) = load_checkpoint(checkpoint)?;
    let store = load_store(cfg)?;
    check_store_dim(&store, ck.meta.d)?;
    let probe = analysis_probe(cfg, &store);
    let reps = embed_probe(&store, &ck.sender, &ck.receiver, &probe)?;
    let mut alignment = alignment_from_reps(&reps.input, &reps.sender, &reps.receiver)?;
    alignment.probe_id = probe_id(&probe);
    alignment.checkpoint_id = Some(ck_id.clone());

    let mut subgroups = Vec::new();
    for grouping in [Grouping::Concept, Grouping::Class] {
        let Ok(labels) = labels_for(store.manifest(), &probe, grouping) else {
            continue;
        };
        for (space, r) in [
            (Space::Input, &reps.input),
            (Space::Sender, &reps.sender),
            (Space::Receiver, &reps.receiver),
        ] {
            match z_subgroup_similarity(r, &labels, space, grouping) {
                Ok(rep) => subgroups.push(rep),
                Err(Error::Grouping(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }

    let dir = cfg.output_dir.join("analysis").join(format!("seed_{:03}", ck.meta.seed));
    create_dir(&dir)?;
    write_json(&dir.join("alignment.json"), &alignment)?;
    write_json(
        &dir.join("subgroups.json"),
        &SubgroupReports {
            checkpoint_id: ck_id,
            probe_id: alignment.probe_id.clone(),
            reports: subgroups.clone(),
        },
    )?;

    let ids: Vec<String> = probe.iter().map(|&r| store.entry(r).image_id.clone()).collect();
    let csv_err = |p: &Path, e: csv::Error| Error::io(p, std::io::Error::other(e.to_string()));

    let pairs_path = dir.join("pairs.csv");
    let mut w = csv::Writer::from_path(&pairs_path).map_err(|e| csv_err(&pairs_path, e))?;
    w.write_record(["image_id_a", "image_id_b", "sim_input", "sim_sender", "sim_receiver"])
        .map_err(|e| csv_err(&pairs_path, e))?;
    for p in shift_pairs(&reps.input, &reps.sender, &reps.receiver, &ids)? {
        w.write_record([
            p.image_a,
            p.image_b,
            p.sim_input.to_string(),
            p.sim_sender.to_string(),
            p.sim_receiver.to_string(),
        ])
        .map_err(|e| csv_err(&pairs_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&pairs_path, e))?;

    let shift = top_shift_pairs(&reps.input, &reps.sender, &reps.receiver, &ids, cfg.analysis.top_k)?;
    let shift_path = dir.join("shift_top.csv");
    let mut w = csv::Writer::from_path(&shift_path).map_err(|e| csv_err(&shift_path, e))?;
    w.write_record(["direction", "image_id_a", "image_id_b", "sim_input", "sim_sender", "sim_receiver", "delta"])
        .map_err(|e| csv_err(&shift_path, e))?;
    for (direction, list) in [("apart", &shift.drifted_apart), ("together", &shift.drifted_together)] {
        for p in list {
            w.write_record([
                direction.to_string(),
                p.image_a.clone(),
                p.image_b.clone(),
                p.sim_input.to_string(),
                p.sim_sender.to_string(),
                p.sim_receiver.to_string(),
                p.delta.to_string(),
            ])
            .map_err(|e| csv_err(&shift_path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(&shift_path, e))?;

    Ok(AnalyzeSummary {
        dir,
        alignment,
        subgroups,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapReport {
    pub checkpoint_id: String,
    pub train_mode: GameMode,
    pub result: SwapTestResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSummary {
    pub dir: PathBuf,
    pub table: CrossEvalTable,
    pub swaps: Vec<SwapReport>,
}

/// Cross-condition evaluation table and target-swap test for up to one
/// checkpoint per training mode. Without a feature store only the noise
/// column is filled.
pub fn cmd_probe(cfg: &ExperimentConfig, checkpoints: &[PathBuf]) -> Result<ProbeSummary> {
    if checkpoints.is_empty() {
        return Err(Error::Config("probe needs at least one --checkpoint".into()));
    }
    let loaded: Vec<(Checkpoint, String)> = checkpoints.iter().map(|p| load_checkpoint(p)).collect::<Result<_>>()?;
    let dim = loaded[0].0.meta.d;
    for (ck, _) in &loaded {
        if ck.meta.d != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: ck.meta.d,
                context: "checkpoint dimensionality",
            });
        }
    }
    let store = match load_store(cfg) {
        Ok(s) => {
            check_store_dim(&s, dim)?;
            Some(s)
        }
        Err(Error::Io { .. }) => None,
        Err(e) => return Err(e),
    };
    let rows = store.as_ref().map(|s| test_rows(cfg, s)).unwrap_or_default();
    let refs: Vec<(&Checkpoint, Option<String>)> = loaded.iter().map(|(c, id)| (c, Some(id.clone()))).collect();
    let table = cross_eval(
        &refs,
        store.as_ref(),
        &rows,
        &cfg.analysis.eval,
        &RngStream::named(cfg.analysis.seed, Stream::Eval),
    )?;
    let swaps = loaded
        .iter()
        .map(|(ck, id)| {
            Ok(SwapReport {
                checkpoint_id: id.clone(),
                train_mode: ck.meta.game_mode,
                result: swap_test(
                    &ck.sender,
                    dim,
                    cfg.analysis.swap_pairs,
                    cfg.analysis.swap_runs,
                    &RngStream::named(cfg.analysis.seed, Stream::Noise),
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dir = cfg.output_dir.join("probe");
    create_dir(&dir)?;
    write_json(&dir.join("cross_eval.json"), &table)?;
    write_json(&dir.join("swap_test.json"), &swaps)?;
    Ok(ProbeSummary { dir, table, swaps })
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSource {
    /// JSON array, or numbers separated by whitespace or commas.
    File(PathBuf),
    /// Unit-normalized standard-normal draw of the given dimensionality.
    Seed { seed: u64, dim: usize },
}

pub fn read_vector_file(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).map_err(|e| Error::format(format!("{}: {e}", path.display())));
    }
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::format(format!("bad number {t:?}"))))
        .collect()
}

pub fn noise_vector(seed: u64, dim: usize) -> Result<Vec<f64>> {
    let mut rng = RngStream::named(seed, Stream::Noise);
    let v: Vec<f64> = (0..dim).map(|_| rng.standard_normal()).collect();
    l2_normalize(&v)
}

/// Writes a noise vector as a P5 greymap; returns `(width, height)`.
pub fn cmd_render_noise(source: &NoiseSource, width: Option<usize>, out: &Path) -> Result<(usize, usize)> {
    let values = match source {
        NoiseSource::File(p) => read_vector_file(p)?,
        NoiseSource::Seed { seed, dim } => noise_vector(*seed, *dim)?,
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("vector must be non-empty and finite".into()));
    }
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    render_pgm(&values, width, out)
}

/// Summarizes the ledger into `report.json`.
pub fn cmd_report(cfg: &ExperimentConfig) -> Result<LedgerSummary> {
    let records = RunLedger::read(&cfg.ledger_path())?;
    let summary = summarize(&records);
    write_json(&cfg.output_dir.join("report.json"), &summary)?;
    Ok(summary)
}
