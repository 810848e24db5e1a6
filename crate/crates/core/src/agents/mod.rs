//! Sender and Receiver policies.
//!
//! The Sender embeds target and distractor with a shared sigmoid projection,
//! concatenates the two embeddings (target first) and maps them linearly to
//! vocabulary logits. The Receiver embeds both candidate images linearly,
//! looks up the received symbol's embedding and scores each image by dot
//! product. Gradients are derived by hand.

mod checkpoint;
mod params;
mod receiver;
mod sender;

pub use checkpoint::{sha256_hex, Checkpoint, CheckpointMeta, LGCK_MAGIC, LGCK_VERSION};
pub use params::{
    axpy_tensors, init_agents, ReceiverGradient, ReceiverParams, SenderGradient, SenderParams,
    Tensors,
};
pub use receiver::{
    receiver_embed, receiver_forward, receiver_grad_logp, receiver_output_for, receiver_policy,
    ReceiverCache, ReceiverOutput,
};
pub use sender::{
    sender_embed, sender_forward, sender_grad_entropy, sender_grad_logp, sender_output_for,
    sender_policy, SenderCache, SenderOutput,
};

pub(crate) use receiver::{
    backward as receiver_backward, logp_score_grad, policy_unchecked as receiver_policy_unchecked,
};
pub(crate) use sender::{
    backward as sender_backward, embed_unchecked as sender_embed_unchecked, entropy_logit_grad,
    logp_logit_grad, policy_unchecked as sender_policy_unchecked,
};
