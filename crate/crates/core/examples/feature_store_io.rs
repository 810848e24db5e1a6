//! Writes a store as LFS1 plus its JSON manifest, reads it back, and
//! ingests the same rows from CSV.
//!
//! ```bash
//! cargo run --example feature_store_io -- [dir]
//! ```

use std::path::PathBuf;

use lewisgame::data::{
    generate_synthetic_features, load_feature_csv, load_feature_store, manifest_path,
    save_feature_store, SyntheticConfig,
};
use lewisgame::numerics::{RngStream, Stream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let cfg = SyntheticConfig {
        n_classes: 2,
        concepts_per_class: 3,
        images_per_concept: 4,
        dim: 8,
        ..Default::default()
    };
    let store = generate_synthetic_features(&cfg, &mut RngStream::named(1, Stream::Data))?;

    let path = dir.join("example.lfs1");
    save_feature_store(&store, &path)?;
    let bytes = std::fs::metadata(&path)?.len();
    println!("wrote {} ({bytes} bytes) and {}", path.display(), manifest_path(&path).display());

    let back = load_feature_store(&path)?;
    let worst = (0..store.len())
        .flat_map(|r| store.row(r).iter().zip(back.row(r)).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    println!("reloaded {} rows, max abs difference {worst:.2e} (f32 storage)", back.len());
    assert_eq!(store.manifest(), back.manifest());

    // the same rows as CSV: image_id, concept_id, class_id, then features
    let csv_path = dir.join("example.csv");
    let mut text = String::from("image_id,concept_id,class_id");
    for k in 0..store.dim() {
        text.push_str(&format!(",f{k}"));
    }
    text.push('\n');
    for r in 0..store.len() {
        let e = store.entry(r);
        text.push_str(&format!("{},{},{}", e.image_id, e.concept_id, e.class_id.unwrap_or_default()));
        for v in store.row(r) {
            text.push_str(&format!(",{v}"));
        }
        text.push('\n');
    }
    std::fs::write(&csv_path, text)?;
    let from_csv = load_feature_csv(&csv_path)?;
    println!("csv ingestion: {} rows, {} concepts", from_csv.len(), from_csv.n_concepts());
    Ok(())
}
