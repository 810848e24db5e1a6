//! Trains one pair per game condition and evaluates each on same-image,
//! different-image and pure-noise games: the cross-condition table.
//!
//! ```bash
//! cargo run --release --example noise_probe
//! ```

use lewisgame::agents::Checkpoint;
use lewisgame::analysis::{cross_eval, EvalProtocol};
use lewisgame::data::{generate_synthetic_features, split_store, GameMode, SyntheticConfig};
use lewisgame::numerics::{RngStream, Stream};
use lewisgame::training::{train, TrainConfig};

fn main() -> lewisgame::Result<()> {
    let data = SyntheticConfig {
        n_classes: 3,
        concepts_per_class: 4,
        images_per_concept: 40,
        dim: 32,
        ..Default::default()
    };
    let store = generate_synthetic_features(&data, &mut RngStream::named(0, Stream::Data))?;
    let base = TrainConfig {
        dim: 32,
        hidden: 16,
        vocab_size: 24,
        total_batches: 5000,
        learning_rate: 0.005,
        validation_every: 1000,
        ..TrainConfig::default()
    };
    let mut checkpoints = Vec::new();
    for mode in [GameMode::SameImage, GameMode::DifferentImage] {
        let run = train(&TrainConfig { mode, ..base.clone() }, &store)?;
        println!("{mode}: final MVR {:.3}", run.final_mvr);
        checkpoints.push(Checkpoint::new(run.sender, run.receiver, run.seed, mode, run.batches_trained));
    }
    let split = split_store(&store, &base.split, &mut RngStream::named(base.split.seed, Stream::Split));
    let protocol = EvalProtocol { runs: 5, batches: 200, batch_size: 32 };
    let pairs: Vec<(&Checkpoint, Option<String>)> = checkpoints.iter().map(|c| (c, None)).collect();
    let table = cross_eval(&pairs, Some(&store), &split.test, &protocol, &RngStream::named(0, Stream::Eval))?;

    println!("\ntrained on        same    diff   noise   (% reward on held-out images)");
    for row in &table.rows {
        let f = |v: Option<f64>| v.map_or("     -".to_string(), |x| format!("{x:6.1}"));
        println!("{:<16} {}  {}  {}", row.train_mode.to_string(), f(row.same_image), f(row.different_image), f(row.noise));
    }
    Ok(())
}
