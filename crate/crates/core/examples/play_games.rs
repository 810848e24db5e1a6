//! Samples one game of each kind and lets freshly initialized agents play
//! it, showing the Sender's top symbols and the Receiver's choice.
//!
//! ```bash
//! cargo run --example play_games
//! ```

use lewisgame::agents::{init_agents, receiver_policy, sender_policy};
use lewisgame::data::{
    generate_synthetic_features, sample_game, ConceptPool, GameMode, SyntheticConfig,
};
use lewisgame::numerics::{RngStream, Stream};
use lewisgame::training::{expected_reward_exact, play_game};

fn main() -> lewisgame::Result<()> {
    let store = generate_synthetic_features(&SyntheticConfig::default(), &mut RngStream::named(0, Stream::Data))?;
    let pool = ConceptPool::all(&store);
    let (sender, receiver) = init_agents(store.dim(), 50, 100, &mut RngStream::named(0, Stream::Init))?;
    let mut rng = RngStream::named(0, Stream::Sampling);

    for mode in [GameMode::SameImage, GameMode::DifferentImage, GameMode::Noise] {
        let game = sample_game(mode, &pool, store.dim(), &mut rng)?;
        game.check(Some(&store)).expect("sampler invariant");
        let views = game.views(Some(&store))?;
        let (probs, _) = sender_policy(&sender, views.sender_target, views.sender_distractor)?;
        let mut top: Vec<(usize, f64)> = probs.iter().copied().enumerate().collect();
        top.sort_by(|a, b| b.1.total_cmp(&a.1));

        let played = play_game(&sender, &receiver, &game, Some(&store), &mut rng)?;
        let (rp, _) = receiver_policy(&receiver, views.receiver_left, views.receiver_right, played.symbol)?;
        println!("{mode}: target at position {}", game.target_position);
        if game.noise.is_none() {
            println!(
                "  sender rows ({}, {}), receiver rows ({}, {})",
                game.sender_target, game.sender_distractor, game.receiver_left, game.receiver_right
            );
        }
        let shown: Vec<String> = top[..3].iter().map(|(s, p)| format!("{s} ({p:.4})")).collect();
        println!("  most likely symbols {}", shown.join(", "));
        println!(
            "  sent {}, receiver p = [{:.3}, {:.3}], chose {}, reward {}",
            played.symbol, rp[0], rp[1], played.choice, played.reward
        );
        println!(
            "  expected reward over all symbols {:.4}",
            expected_reward_exact(&sender, &receiver, &game, Some(&store))?
        );
    }
    Ok(())
}
