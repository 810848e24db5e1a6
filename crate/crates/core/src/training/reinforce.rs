use serde::{Deserialize, Serialize};

use crate::agents::{
    axpy_tensors, entropy_logit_grad, logp_logit_grad, logp_score_grad, receiver_backward,
    sender_backward, ReceiverGradient, ReceiverParams, SenderGradient, SenderParams,
};
use crate::data::FeatureStore;
use crate::error::{Error, Result};
use crate::training::TrajectoryRecord;

/// Exponential moving average of batch rewards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineState {
    pub value: f64,
    /// `1.0` freezes the baseline at `value`.
    pub decay: f64,
}

impl BaselineState {
    pub fn new(decay: f64) -> Self {
        BaselineState { value: 0.0, decay }
    }

    pub fn constant(value: f64) -> Self {
        BaselineState { value, decay: 1.0 }
    }

    pub fn observe(&mut self, mean_reward: f64) {
        self.value = self.decay * self.value + (1.0 - self.decay) * mean_reward;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateOptions {
    pub learning_rate: f64,
    pub entropy_bonus: f64,
}

/// Batch-mean Reinforce gradient estimate for both agents.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyGradient {
    pub sender: SenderGradient,
    pub receiver: ReceiverGradient,
}

/// `mean_i (r_i - b) * grad log p(a_i)` for both agents, plus
/// `entropy_bonus * grad H(sender)` averaged over the batch.
pub fn reinforce_gradient(
    sender: &SenderParams,
    receiver: &ReceiverParams,
    batch: &[TrajectoryRecord],
    store: Option<&FeatureStore>,
    baseline: f64,
    entropy_bonus: f64,
) -> Result<PolicyGradient> {
    if batch.is_empty() {
        return Err(Error::Parameter("empty trajectory batch".into()));
    }
    let mut grad = PolicyGradient {
        sender: SenderGradient::zeros_like(sender),
        receiver: ReceiverGradient::zeros_like(receiver),
    };
    let inv_n = 1.0 / batch.len() as f64;
    for t in batch {
        let views = t.instance.views(store)?;
        crate::training::game::check_dims(sender, receiver, &views)?;
        let advantage = t.reward - baseline;
        if advantage != 0.0 {
            let dlogits = logp_logit_grad(&t.sender.probs, t.symbol, sender.temperature);
            sender_backward(
                sender,
                &t.sender.cache,
                views.sender_target,
                views.sender_distractor,
                &dlogits,
                advantage * inv_n,
                &mut grad.sender,
            );
            receiver_backward(
                receiver,
                &t.receiver.cache,
                views.receiver_left,
                views.receiver_right,
                t.symbol,
                logp_score_grad(t.receiver.probs, t.choice),
                advantage * inv_n,
                &mut grad.receiver,
            );
        }
        if entropy_bonus > 0.0 {
            let dlogits = entropy_logit_grad(&t.sender.probs, sender.temperature);
            sender_backward(
                sender,
                &t.sender.cache,
                views.sender_target,
                views.sender_distractor,
                &dlogits,
                entropy_bonus * inv_n,
                &mut grad.sender,
            );
        }
    }
    Ok(grad)
}

/// One gradient-ascent step on both agents, then a baseline update with the
/// batch's mean reward. Returns the batch's mean reward.
pub fn reinforce_update(
    sender: &mut SenderParams,
    receiver: &mut ReceiverParams,
    batch: &[TrajectoryRecord],
    store: Option<&FeatureStore>,
    baseline: &mut BaselineState,
    opts: UpdateOptions,
) -> Result<f64> {
    let grad = reinforce_gradient(sender, receiver, batch, store, baseline.value, opts.entropy_bonus)?;
    axpy_tensors(opts.learning_rate, &grad.sender, sender);
    axpy_tensors(opts.learning_rate, &grad.receiver, receiver);
    let mean_reward = batch.iter().map(|t| t.reward).sum::<f64>() / batch.len() as f64;
    baseline.observe(mean_reward);
    Ok(mean_reward)
}
