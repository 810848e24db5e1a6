//! Expected reward by full enumeration of the Sender's vocabulary, and its
//! analytic gradient. These are the reference values Monte-Carlo Reinforce
//! estimates are checked against.

use crate::agents::{
    logp_score_grad, receiver_backward, receiver_policy_unchecked, sender_backward,
    sender_policy_unchecked, ReceiverGradient, ReceiverParams, SenderGradient, SenderParams,
};
use crate::data::{FeatureStore, GameInstance};
use crate::error::{Error, Result};
use crate::training::game::check_dims;
use crate::training::PolicyGradient;

pub const ENUMERATION_LIMIT: usize = 1000;

fn guard(sender: &SenderParams) -> Result<()> {
    if sender.vocab() > ENUMERATION_LIMIT {
        return Err(Error::Guard {
            vocab: sender.vocab(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// `sum_s p_S(s) * p_R(target position | s)`
pub fn expected_reward_exact(
    sender: &SenderParams,
    receiver: &ReceiverParams,
    instance: &GameInstance,
    store: Option<&FeatureStore>,
) -> Result<f64> {
    guard(sender)?;
    let views = instance.views(store)?;
    check_dims(sender, receiver, &views)?;
    let (p_sender, _) = sender_policy_unchecked(sender, views.sender_target, views.sender_distractor);
    Ok(p_sender
        .iter()
        .enumerate()
        .map(|(s, ps)| {
            let (pr, _) = receiver_policy_unchecked(receiver, views.receiver_left, views.receiver_right, s);
            ps * pr[instance.target_position]
        })
        .sum())
}

/// Gradient of [`expected_reward_exact`] with respect to both agents.
pub fn expected_reward_grad_exact(
    sender: &SenderParams,
    receiver: &ReceiverParams,
    instance: &GameInstance,
    store: Option<&FeatureStore>,
) -> Result<PolicyGradient> {
    guard(sender)?;
    let views = instance.views(store)?;
    check_dims(sender, receiver, &views)?;
    let t = instance.target_position;
    let (p_sender, s_cache) = sender_policy_unchecked(sender, views.sender_target, views.sender_distractor);

    let mut grad = PolicyGradient {
        sender: SenderGradient::zeros_like(sender),
        receiver: ReceiverGradient::zeros_like(receiver),
    };
    // d/dz_k sum_s p_S(s) w_s = p_S(k) (w_k - sum_s p_S(s) w_s) / tau
    let mut win = vec![0.0; p_sender.len()];
    for (s, &ps) in p_sender.iter().enumerate() {
        let (pr, r_cache) = receiver_policy_unchecked(receiver, views.receiver_left, views.receiver_right, s);
        win[s] = pr[t];
        // p_S(s) * grad p_R(t | s) = p_S(s) p_R(t | s) grad log p_R(t | s)
        receiver_backward(
            receiver,
            &r_cache,
            views.receiver_left,
            views.receiver_right,
            s,
            logp_score_grad(pr, t),
            ps * pr[t],
            &mut grad.receiver,
        );
    }
    let expected: f64 = p_sender.iter().zip(&win).map(|(p, w)| p * w).sum();
    let dlogits: Vec<f64> = p_sender
        .iter()
        .zip(&win)
        .map(|(p, w)| p * (w - expected) / sender.temperature)
        .collect();
    sender_backward(
        sender,
        &s_cache,
        views.sender_target,
        views.sender_distractor,
        &dlogits,
        1.0,
        &mut grad.sender,
    );
    Ok(grad)
}
