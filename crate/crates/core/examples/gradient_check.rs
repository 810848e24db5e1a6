//! Compares the three gradients of the expected game reward on one small
//! instance: the analytic one, central finite differences, and the mean of
//! sampled Reinforce estimates.
//!
//! ```bash
//! cargo run --release --example gradient_check -- [samples]
//! ```

use lewisgame::agents::{init_agents, Tensors};
use lewisgame::data::sample_noise_game;
use lewisgame::numerics::{RngStream, Stream};
use lewisgame::training::{
    expected_reward_exact, expected_reward_grad_exact, play_game, reinforce_gradient,
};

fn main() -> lewisgame::Result<()> {
    let samples: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let (mut sender, receiver) = init_agents(8, 4, 5, &mut RngStream::named(4, Stream::Init))?;
    // sharpen the Sender so its policy is far from uniform
    for x in sender.w_vocab.as_mut_slice() {
        *x *= 8.0;
    }
    let game = sample_noise_game(8, &mut RngStream::named(4, Stream::Noise))?;

    let exact = expected_reward_grad_exact(&sender, &receiver, &game, None)?;
    println!("expected reward {:.6}", expected_reward_exact(&sender, &receiver, &game, None)?);

    let h = 1e-6;
    println!("sender coordinate   analytic        finite diff");
    for k in (0..sender.num_scalars()).step_by(17) {
        let (mut up, mut down) = (sender.clone(), sender.clone());
        up.set_scalar(k, sender.scalar(k) + h);
        down.set_scalar(k, sender.scalar(k) - h);
        let fd = (expected_reward_exact(&up, &receiver, &game, None)?
            - expected_reward_exact(&down, &receiver, &game, None)?)
            / (2.0 * h);
        println!("{k:>17} {:>14.8e} {:>14.8e}", exact.sender.scalar(k), fd);
    }

    let mut rng = RngStream::named(4, Stream::Sampling);
    let batch: Vec<_> = (0..samples)
        .map(|_| play_game(&sender, &receiver, &game, None, &mut rng))
        .collect::<lewisgame::Result<_>>()?;
    let mc = reinforce_gradient(&sender, &receiver, &batch, None, 0.0, 0.0)?;
    let (a, b) = (exact.sender.flatten(), mc.sender.flatten());
    let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    println!("Reinforce mean over {samples} games: cosine {:.4}, norm ratio {:.4}", dot / (na * nb), nb / na);
    Ok(())
}
