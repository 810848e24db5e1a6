//! Same-concept and same-class similarity, z-normalized per space, in the
//! input, Sender and Receiver spaces of a trained pair, and the image pairs
//! whose similarity moved the most.
//!
//! ```bash
//! cargo run --release --example subgroup_drift
//! ```

use lewisgame::analysis::{
    embed_probe, labels_for, select_probe, top_shift_pairs, z_subgroup_similarity, Grouping, Space,
};
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
    let run = train(&config, &store)?;
    let split = split_store(&store, &config.split, &mut RngStream::named(config.split.seed, Stream::Split));
    let probe = select_probe(&split.test, 120, &mut RngStream::named(0, Stream::Probe));
    let reps = embed_probe(&store, &run.sender, &run.receiver, &probe)?;

    println!("mean z of within-group pairs");
    println!("grouping      input  sender  receiver");
    for grouping in [Grouping::Concept, Grouping::Class] {
        let labels = labels_for(store.manifest(), &probe, grouping)?;
        let z = |space, r: &[Vec<f64>]| z_subgroup_similarity(r, &labels, space, grouping).map(|x| x.mean_z_within);
        println!(
            "{:<11} {:7.3} {:7.3} {:9.3}",
            format!("{grouping:?}"),
            z(Space::Input, &reps.input)?,
            z(Space::Sender, &reps.sender)?,
            z(Space::Receiver, &reps.receiver)?
        );
    }

    let ids: Vec<String> = probe.iter().map(|&r| store.entry(r).image_id.clone()).collect();
    let shift = top_shift_pairs(&reps.input, &reps.sender, &reps.receiver, &ids, 3)?;
    let lists = [
        ("largest input - sender delta", &shift.drifted_apart),
        ("most negative input - sender delta", &shift.drifted_together),
    ];
    for (label, list) in lists {
        println!("\n{label}:");
        for p in list {
            println!(
                "  {} / {}  input {:+.3}  sender {:+.3}  receiver {:+.3}  delta {:+.3}",
                p.image_a, p.image_b, p.sim_input, p.sim_sender, p.sim_receiver, p.delta
            );
        }
    }
    Ok(())
}
