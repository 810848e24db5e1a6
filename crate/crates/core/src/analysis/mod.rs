//! Representation analyses of trained agents: RSA alignment between input,
//! Sender and Receiver spaces, z-normalized subgroup similarity, largest
//! similarity shifts, and noise probes.

mod alignment;
mod probe;
mod rsa;
mod shift;
mod subgroup;

pub use alignment::{
    alignment_from_reps, alignment_report, embed_probe, probe_id, AlignmentReport, ProbeEmbeddings,
};
pub use probe::{
    cross_eval, evaluate_protocol, swap_test, CrossEvalRow, CrossEvalTable, EvalProtocol,
    SwapTestResult, TEST_MODES,
};
pub use rsa::{n_pairs, pairwise_cosines, rsa_score, select_probe, RsaResult, SimilarityProfile};
pub use shift::{shift_pairs, top_shift_pairs, ShiftPair, ShiftReport};
pub use subgroup::{
    labels_for, z_normalized_similarities, z_subgroup_similarity, Grouping, Space,
    SubgroupSimilarityReport,
};
