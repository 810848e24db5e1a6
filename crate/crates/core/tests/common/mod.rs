#![allow(dead_code)]

use lewisgame::agents::{init_agents, ReceiverParams, SenderParams};
use lewisgame::data::{generate_synthetic_features, FeatureStore, ManifestEntry, SyntheticConfig};
use lewisgame::numerics::{Mat64, RngStream, Stream};

pub fn synthetic_store(classes: usize, concepts: usize, images: usize, dim: usize, seed: u64) -> FeatureStore {
    let cfg = SyntheticConfig {
        n_classes: classes,
        concepts_per_class: concepts,
        images_per_concept: images,
        dim,
        ..Default::default()
    };
    generate_synthetic_features(&cfg, &mut RngStream::named(seed, Stream::Data)).unwrap()
}

/// A store with arbitrary (non-degenerate) rows and the given concept ids.
pub fn labelled_store(concepts: &[i64], dim: usize) -> FeatureStore {
    let n = concepts.len();
    let m = Mat64::from_fn(n, dim, |r, c| ((r * dim + c) as f64 * 0.7 + 1.0).sin() + 1.5);
    let manifest = concepts
        .iter()
        .enumerate()
        .map(|(i, &c)| ManifestEntry {
            image_id: format!("img{i}"),
            concept_id: c,
            class_id: Some(c / 2),
        })
        .collect();
    FeatureStore::new(m, manifest).unwrap()
}

/// Agents whose every tensor, including the vocabulary bias, is random.
pub fn random_agents(d: usize, h: usize, v: usize, seed: u64) -> (SenderParams, ReceiverParams) {
    let mut rng = RngStream::named(seed, Stream::Init);
    let (mut s, mut r) = init_agents(d, h, v, &mut rng).unwrap();
    let mut jitter = |m: &mut [f64], scale: f64| {
        for x in m.iter_mut() {
            *x = *x * 2.0 + scale * rng.standard_normal();
        }
    };
    jitter(s.w_img.as_mut_slice(), 0.3);
    jitter(s.w_vocab.as_mut_slice(), 0.3);
    jitter(&mut s.b_vocab, 0.3);
    jitter(r.u_img.as_mut_slice(), 0.3);
    jitter(r.e_sym.as_mut_slice(), 0.3);
    (s, r)
}

pub fn unit_gaussian(dim: usize, rng: &mut RngStream) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.standard_normal()).collect();
    lewisgame::numerics::l2_normalize(&v).unwrap()
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
