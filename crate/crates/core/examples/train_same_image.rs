//! Trains one Sender/Receiver pair on the same-image game over a synthetic
//! store and prints the validation curve.
//!
//! ```bash
//! cargo run --release --example train_same_image -- [seed] [batches] [lr]
//! ```

use lewisgame::data::{generate_synthetic_features, SyntheticConfig};
use lewisgame::numerics::{RngStream, Stream};
use lewisgame::training::{train, TrainConfig};

fn main() -> lewisgame::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = args.first().and_then(|s| s.parse().ok()).unwrap_or(0);
    let batches = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(50_000);
    let data_cfg = SyntheticConfig::default();
    let store = generate_synthetic_features(&data_cfg, &mut RngStream::named(0, Stream::Data))?;
    let mut config = TrainConfig {
        seed,
        total_batches: batches,
        validation_every: (batches / 20).max(1),
        ..TrainConfig::default()
    };
    if let Some(lr) = args.get(2).and_then(|s| s.parse().ok()) {
        config.learning_rate = lr;
    }
    let start = std::time::Instant::now();
    let run = train(&config, &store)?;
    println!("batch      mvr  rsa_sr  rsa_si  rsa_ri");
    for r in &run.curve {
        let f = |x: Option<f64>| x.map(|v| format!("{v:7.3}")).unwrap_or_else(|| "     - ".into());
        println!("{:6} {:7.3} {} {} {}", r.batch, r.mvr, f(r.rsa_sr), f(r.rsa_si), f(r.rsa_ri));
    }
    println!(
        "seed {} final MVR {:.3} success {} ({:.1?})",
        run.seed,
        run.final_mvr,
        run.success,
        start.elapsed()
    );
    Ok(())
}
