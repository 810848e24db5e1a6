use crate::agents::{
    receiver_policy_unchecked, sender_policy_unchecked, ReceiverOutput, ReceiverParams,
    SenderOutput, SenderParams,
};
use crate::data::{FeatureStore, GameInstance, GameViews};
use crate::error::{Error, Result};
use crate::numerics::{sample_categorical_unchecked, RngStream};

/// Everything one played game leaves behind for the update step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub instance: GameInstance,
    pub symbol: usize,
    pub choice: usize,
    pub reward: f64,
    pub sender: SenderOutput,
    pub receiver: ReceiverOutput,
}

impl TrajectoryRecord {
    pub fn sender_log_prob(&self) -> f64 {
        self.sender.log_prob
    }

    pub fn receiver_log_prob(&self) -> f64 {
        self.receiver.log_prob
    }
}

pub(crate) fn check_dims(sender: &SenderParams, receiver: &ReceiverParams, views: &GameViews<'_>) -> Result<()> {
    if sender.vocab() != receiver.vocab() {
        return Err(Error::Dimension {
            expected: sender.vocab(),
            got: receiver.vocab(),
            context: "receiver vocabulary",
        });
    }
    for (x, d, context) in [
        (views.sender_target, sender.dim(), "sender target input"),
        (views.sender_distractor, sender.dim(), "sender distractor input"),
        (views.receiver_left, receiver.dim(), "receiver left input"),
        (views.receiver_right, receiver.dim(), "receiver right input"),
    ] {
        if x.len() != d {
            return Err(Error::Dimension {
                expected: d,
                got: x.len(),
                context,
            });
        }
    }
    Ok(())
}

pub(crate) fn play_views(
    sender: &SenderParams,
    receiver: &ReceiverParams,
    views: &GameViews<'_>,
    target_position: usize,
    rng: &mut RngStream,
) -> (SenderOutput, ReceiverOutput, f64) {
    let (probs, cache) = sender_policy_unchecked(sender, views.sender_target, views.sender_distractor);
    let symbol = sample_categorical_unchecked(&probs, rng);
    let sender_out = SenderOutput {
        log_prob: probs[symbol].ln(),
        probs,
        symbol,
        cache,
    };
    let (rprobs, rcache) = receiver_policy_unchecked(receiver, views.receiver_left, views.receiver_right, symbol);
    let choice = sample_categorical_unchecked(&rprobs, rng);
    let receiver_out = ReceiverOutput {
        log_prob: rprobs[choice].ln(),
        probs: rprobs,
        choice,
        cache: rcache,
    };
    let reward = if choice == target_position { 1.0 } else { 0.0 };
    (sender_out, receiver_out, reward)
}

/// Plays one round: the Sender emits a symbol for its ordered pair, the
/// Receiver picks a position, and both earn 1 if it held the target.
pub fn play_game(
    sender: &SenderParams,
    receiver: &ReceiverParams,
    instance: &GameInstance,
    store: Option<&FeatureStore>,
    rng: &mut RngStream,
) -> Result<TrajectoryRecord> {
    let views = instance.views(store)?;
    check_dims(sender, receiver, &views)?;
    let (s, r, reward) = play_views(sender, receiver, &views, instance.target_position, rng);
    Ok(TrajectoryRecord {
        instance: instance.clone(),
        symbol: s.symbol,
        choice: r.choice,
        reward,
        sender: s,
        receiver: r,
    })
}

/// Mean reward over `repeats` sampled plays of every instance.
pub fn evaluate(
    sender: &SenderParams,
    receiver: &ReceiverParams,
    instances: &[GameInstance],
    store: Option<&FeatureStore>,
    rng: &mut RngStream,
    repeats: usize,
) -> Result<f64> {
    if instances.is_empty() || repeats == 0 {
        return Err(Error::Parameter("evaluation needs instances and repeats >= 1".into()));
    }
    let mut total = 0.0;
    for _ in 0..repeats {
        for inst in instances {
            let views = inst.views(store)?;
            check_dims(sender, receiver, &views)?;
            total += play_views(sender, receiver, &views, inst.target_position, rng).2;
        }
    }
    Ok(total / (instances.len() * repeats) as f64)
}
