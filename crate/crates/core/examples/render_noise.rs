//! Renders a unit-normalized Gaussian noise vector, the kind of input the
//! noise probe feeds the agents, as a binary PGM greymap.
//!
//! ```bash
//! cargo run --example render_noise -- [seed] [dim] [out.pgm]
//! ```

use std::path::PathBuf;

use lewisgame::cli::{decode_pgm, noise_vector, render_pgm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = args.first().and_then(|s| s.parse().ok()).unwrap_or(0);
    let dim = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4096);
    let out = args
        .get(2)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("noise.pgm"));

    let v = noise_vector(seed, dim)?;
    let (w, h) = render_pgm(&v, None, &out)?;
    let (_, _, pixels) = decode_pgm(&std::fs::read(&out)?)?;
    let mean = pixels.iter().map(|&p| p as f64).sum::<f64>() / pixels.len() as f64;
    println!("{} ({w}x{h}), mean grey level {mean:.1}", out.display());
    Ok(())
}
