//! Lewis referential games between a Sender and a Receiver network.
//!
//! The crate covers the whole experimental pipeline: feature stores and
//! game samplers ([`data`]), the two agents with hand-derived gradients
//! ([`agents`]), Reinforce training with exact-expectation oracles
//! ([`training`]), representation analyses such as RSA, subgroup
//! similarity drift, noise probes and target-swap tests ([`analysis`]),
//! and the file-based experiment runner behind the `lewisgame` binary
//! ([`cli`]).

pub mod agents;
pub mod analysis;
pub mod cli;
pub mod data;
mod error;
pub mod numerics;
pub mod training;

pub use error::{Error, Result};
