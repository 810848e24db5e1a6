//! Trains a pair on a small synthetic store, then scores how the Sender,
//! Receiver and input spaces relate by RSA on held-out images, before and
//! after training.
//!
//! ```bash
//! cargo run --release --example rsa_alignment
//! ```

use lewisgame::agents::init_agents;
use lewisgame::analysis::{alignment_report, select_probe};
use lewisgame::data::{generate_synthetic_features, split_store, SyntheticConfig};
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
    let config = TrainConfig {
        dim: 32,
        hidden: 16,
        vocab_size: 24,
        total_batches: 5000,
        learning_rate: 0.005,
        validation_every: 1000,
        ..TrainConfig::default()
    };
    let split = split_store(&store, &config.split, &mut RngStream::named(config.split.seed, Stream::Split));
    let probe = select_probe(&split.test, 100, &mut RngStream::named(0, Stream::Probe));

    let (s0, r0) = init_agents(32, 16, 24, &mut RngStream::named(config.seed, Stream::Init))?;
    let before = alignment_report(&store, &s0, &r0, &probe)?;
    let run = train(&config, &store)?;
    let after = alignment_report(&store, &run.sender, &run.receiver, &probe)?;

    println!("{} probe images, {} pairs", after.n_items, after.n_pairs);
    println!("              rho_sr  rho_si  rho_ri");
    println!("untrained    {:7.3} {:7.3} {:7.3}", before.rho_sr, before.rho_si, before.rho_ri);
    println!(
        "trained      {:7.3} {:7.3} {:7.3}   (final MVR {:.3})",
        after.rho_sr, after.rho_si, after.rho_ri, run.final_mvr
    );
    Ok(())
}
