//! Seeded primitives shared by every other module: dense linear algebra,
//! activations, categorical sampling, cosine similarity and rank correlation.

mod linalg;
mod rng;
mod stats;

pub use linalg::{
    axpy, cosine, dot, l2_normalize, norm, sigmoid, sigmoid_scalar, softmax, Mat64, Vec64,
};
pub(crate) use linalg::softmax_unchecked;
pub use rng::{RngStream, Stream};
pub use stats::{average_ranks, mean_std, pearson, sample_categorical, spearman};
pub(crate) use stats::sample_categorical_unchecked;
