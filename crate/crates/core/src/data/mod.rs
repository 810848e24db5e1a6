//! Feature stores, synthetic data, splits and game samplers.

mod game;
mod io;
mod split;
mod store;
mod synthetic;

pub use game::{
    build_validation_set, sample_different_image_game, sample_game, sample_noise_game,
    sample_same_image_game, ConceptPool, GameInstance, GameMode, GameViews,
};
pub use io::{
    decode_lfs1, encode_lfs1, load_feature_csv, load_feature_store, manifest_path,
    save_feature_store, LFS1_MAGIC, LFS1_VERSION,
};
pub use split::{split_store, SplitConfig, SplitSpec};
pub use store::{FeatureStore, ManifestEntry};
pub use synthetic::{generate_synthetic_features, SyntheticConfig};
