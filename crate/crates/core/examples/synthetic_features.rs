//! Generates a class > concept > image hierarchy of feature vectors and
//! shows how cosine similarity falls off across the levels.
//!
//! ```bash
//! cargo run --example synthetic_features
//! ```

use lewisgame::data::{generate_synthetic_features, SyntheticConfig};
use lewisgame::numerics::{cosine, RngStream, Stream};

fn main() -> lewisgame::Result<()> {
    let cfg = SyntheticConfig::default();
    let store = generate_synthetic_features(&cfg, &mut RngStream::named(0, Stream::Data))?;
    println!(
        "{} rows, d={}, {} concepts in {} classes",
        store.len(),
        store.dim(),
        store.n_concepts(),
        store.n_classes()
    );

    let (mut same_concept, mut same_class, mut across) = (Vec::new(), Vec::new(), Vec::new());
    for i in (0..store.len()).step_by(37) {
        for j in (i + 1..store.len()).step_by(53) {
            let c = cosine(store.row(i), store.row(j))?;
            if store.concept(i) == store.concept(j) {
                same_concept.push(c);
            } else if store.class(i) == store.class(j) {
                same_class.push(c);
            } else {
                across.push(c);
            }
        }
    }
    let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    println!("mean cosine, same concept : {:.3} ({} pairs)", avg(&same_concept), same_concept.len());
    println!("mean cosine, same class   : {:.3} ({} pairs)", avg(&same_class), same_class.len());
    println!("mean cosine, across class : {:.3} ({} pairs)", avg(&across), across.len());
    let e = store.entry(0);
    println!("first row: id {} concept {} class {:?}", e.image_id, e.concept_id, e.class_id);
    Ok(())
}
