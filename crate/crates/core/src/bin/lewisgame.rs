use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lewisgame::cli::{self, CliError, NoiseSource, Overrides};
use lewisgame::data::GameMode;

#[derive(Parser)]
#[command(name = "lewisgame", version, about = "Referential-game experiments on feature vectors")]
struct Args {
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    seeds: Option<usize>,
    /// same | diff
    #[arg(long, global = true)]
    mode: Option<GameMode>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    probe_size: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate (or ingest) the feature store
    GenData,
    /// Train every configured seed
    Train,
    /// RSA, subgroup and shift analysis of one checkpoint
    Analyze {
        #[arg(long)]
        checkpoint: PathBuf,
    },
    /// Cross-condition evaluation and swap test
    Probe {
        #[arg(long, required = true)]
        checkpoint: Vec<PathBuf>,
    },
    /// Render a noise vector as a PGM greymap
    RenderNoise {
        /// Vector file (JSON array or whitespace/comma separated)
        #[arg(long, conflicts_with = "noise_seed")]
        vector: Option<PathBuf>,
        #[arg(long)]
        noise_seed: Option<u64>,
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long, default_value = "noise.pgm")]
        output: PathBuf,
    },
    /// Summarize the run ledger
    Report,
}

fn run(args: Args) -> Result<(), CliError> {
    let overrides = Overrides {
        seed: args.seed,
        seeds: args.seeds,
        mode: args.mode,
        out: args.out,
        probe_size: args.probe_size,
    };
    let cfg = || cli::load_config(args.config.as_deref(), &overrides);
    match args.command {
        Command::GenData => {
            let s = cli::cmd_gen_data(&cfg()?)?;
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "{}: {} rows, d={}, {} concepts, {} classes",
                s.path.display(),
                s.rows,
                s.dim,
                s.concepts,
                s.classes
            );
        }
        Command::Train => {
            let result = cli::cmd_train(&cfg()?);
            let records = match &result {
                Ok(r) => r.as_slice(),
                Err(_) => &[],
            };
            for r in records {
                println!(
                    "seed {:>3}  mvr {:.3}  success {}  rho_sr {:.3}  rho_si {:.3}  rho_ri {:.3}",
                    r.seed, r.final_mvr, r.success, r.rho_sr, r.rho_si, r.rho_ri
                );
            }
            result?;
        }
        Command::Analyze { checkpoint } => {
            let s = cli::cmd_analyze(&cfg()?, &checkpoint)?;
            let a = &s.alignment;
            println!(
                "rho_sr {:.4}  rho_si {:.4}  rho_ri {:.4}  ({} items)",
                a.rho_sr, a.rho_si, a.rho_ri, a.n_items
            );
            for r in &s.subgroups {
                println!("{:?}/{:?}: mean z {:.4}", r.space, r.grouping, r.mean_z_within);
            }
            println!("wrote {}", s.dir.display());
        }
        Command::Probe { checkpoint } => {
            let s = cli::cmd_probe(&cfg()?, &checkpoint)?;
            let pct = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.1}"));
            println!("train mode        same   diff   noise");
            for r in &s.table.rows {
                println!(
                    "{:<16} {:>6} {:>6} {:>6}",
                    r.train_mode.to_string(),
                    pct(r.same_image),
                    pct(r.different_image),
                    pct(r.noise)
                );
            }
            for w in &s.swaps {
                println!("swap test ({}): {:.4} changed", w.train_mode, w.result.fraction_changed);
            }
            println!("wrote {}", s.dir.display());
        }
        Command::RenderNoise {
            vector,
            noise_seed,
            dim,
            width,
            output,
        } => {
            let source = match vector {
                Some(p) => NoiseSource::File(p),
                None => NoiseSource::Seed {
                    seed: noise_seed.unwrap_or(0),
                    dim,
                },
            };
            let (w, h) = cli::cmd_render_noise(&source, width, &output)?;
            println!("{} ({w}x{h})", output.display());
        }
        Command::Report => {
            let s = cli::cmd_report(&cfg()?)?;
            println!("{}", serde_json::to_string_pretty(&s).map_err(lewisgame::Error::from)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
