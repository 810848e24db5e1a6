//! The whole file-based pipeline driven from code: generate a store, train
//! a small seed sweep, analyze and probe the first checkpoint, and
//! summarize the ledger. The same steps back the `lewisgame` subcommands.
//!
//! ```bash
//! cargo run --release --example experiment_pipeline -- [out-dir]
//! ```

use std::path::PathBuf;

use lewisgame::cli::{
    cmd_analyze, cmd_gen_data, cmd_probe, cmd_report, cmd_train, ExperimentConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("lewisgame-pipeline"));
    let mut cfg = ExperimentConfig::from_json(
        r#"{
            "seeds": 3,
            "data": {"synthetic": {"n_classes": 3, "concepts_per_class": 4, "images_per_concept": 40, "dim": 32}},
            "train": {"dim": 32, "hidden": 16, "vocab_size": 24, "total_batches": 5000,
                      "learning_rate": 0.005, "validation_every": 500},
            "analysis": {"probe_size": 100, "eval": {"runs": 5, "batches": 200, "batch_size": 32}}
        }"#,
    )?;
    cfg.output_dir = out;
    cfg.validate()?;

    let data = cmd_gen_data(&cfg)?;
    println!("store {}: {} rows, d={}", data.path.display(), data.rows, data.dim);

    let records = cmd_train(&cfg)?;
    for r in &records {
        println!("seed {} final MVR {:.3} success {}", r.seed, r.final_mvr, r.success);
    }

    let checkpoint = cfg.output_dir.join(&records[0].checkpoint);
    let analysis = cmd_analyze(&cfg, &checkpoint)?;
    println!(
        "analysis in {}: rho_sr {:.3}, rho_si {:.3}, rho_ri {:.3}",
        analysis.dir.display(),
        analysis.alignment.rho_sr,
        analysis.alignment.rho_si,
        analysis.alignment.rho_ri
    );

    let probe = cmd_probe(&cfg, &[checkpoint])?;
    let pct = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.1}%"));
    for row in probe.table.rows.iter().filter(|r| r.noise.is_some()) {
        println!(
            "cross-eval for {}-trained agents: same {}, different {}, noise {}",
            row.train_mode,
            pct(row.same_image),
            pct(row.different_image),
            pct(row.noise)
        );
    }

    let summary = cmd_report(&cfg)?;
    println!("{} of {} seeds successful", summary.successes, summary.seeds);
    Ok(())
}
