use crate::agents::{SenderGradient, SenderParams};
use crate::error::{Error, Result};
use crate::numerics::{sample_categorical_unchecked, sigmoid, softmax_unchecked, RngStream};

/// Activations kept from a forward pass for backpropagation.
#[derive(Debug, Clone, PartialEq)]
pub struct SenderCache {
    pub u_target: Vec<f64>,
    pub u_distractor: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SenderOutput {
    pub probs: Vec<f64>,
    pub symbol: usize,
    pub log_prob: f64,
    pub cache: SenderCache,
}

fn check_input(p: &SenderParams, x: &[f64], context: &'static str) -> Result<()> {
    if x.len() != p.dim() {
        return Err(Error::Dimension {
            expected: p.dim(),
            got: x.len(),
            context,
        });
    }
    Ok(())
}

pub(crate) fn embed_unchecked(p: &SenderParams, x: &[f64]) -> Vec<f64> {
    sigmoid(&p.w_img.matvec(x))
}

pub(crate) fn policy_unchecked(p: &SenderParams, x_target: &[f64], x_distractor: &[f64]) -> (Vec<f64>, SenderCache) {
    let u_target = embed_unchecked(p, x_target);
    let u_distractor = embed_unchecked(p, x_distractor);
    let h = p.hidden();
    let mut logits = p.b_vocab.clone();
    for (l, row) in logits.iter_mut().zip(p.w_vocab.as_slice().chunks_exact(2 * h)) {
        *l += crate::numerics::dot(&row[..h], &u_target) + crate::numerics::dot(&row[h..], &u_distractor);
    }
    let probs = softmax_unchecked(&logits, p.temperature);
    (
        probs,
        SenderCache {
            u_target,
            u_distractor,
        },
    )
}

/// Symbol distribution for an ordered (target, distractor) pair.
pub fn sender_policy(p: &SenderParams, x_target: &[f64], x_distractor: &[f64]) -> Result<(Vec<f64>, SenderCache)> {
    check_input(p, x_target, "sender target input")?;
    check_input(p, x_distractor, "sender distractor input")?;
    Ok(policy_unchecked(p, x_target, x_distractor))
}

/// Forward pass followed by sampling one symbol.
pub fn sender_forward(
    p: &SenderParams,
    x_target: &[f64],
    x_distractor: &[f64],
    rng: &mut RngStream,
) -> Result<SenderOutput> {
    let (probs, cache) = sender_policy(p, x_target, x_distractor)?;
    let symbol = sample_categorical_unchecked(&probs, rng);
    Ok(SenderOutput {
        log_prob: probs[symbol].ln(),
        probs,
        symbol,
        cache,
    })
}

/// Forward pass with the symbol fixed instead of sampled.
pub fn sender_output_for(
    p: &SenderParams,
    x_target: &[f64],
    x_distractor: &[f64],
    symbol: usize,
) -> Result<SenderOutput> {
    if symbol >= p.vocab() {
        return Err(Error::Parameter(format!("symbol {symbol} outside vocabulary of {}", p.vocab())));
    }
    let (probs, cache) = sender_policy(p, x_target, x_distractor)?;
    Ok(SenderOutput {
        log_prob: probs[symbol].ln(),
        probs,
        symbol,
        cache,
    })
}

/// The Sender's representation of one image: `sigmoid(W_img x)`.
pub fn sender_embed(p: &SenderParams, x: &[f64]) -> Result<Vec<f64>> {
    check_input(p, x, "sender embed input")?;
    Ok(embed_unchecked(p, x))
}

/// `d log p[symbol] / d logits`
pub(crate) fn logp_logit_grad(probs: &[f64], symbol: usize, temperature: f64) -> Vec<f64> {
    let mut g: Vec<f64> = probs.iter().map(|p| -p / temperature).collect();
    g[symbol] += 1.0 / temperature;
    g
}

/// `d H(probs) / d logits` for the Shannon entropy in nats.
pub(crate) fn entropy_logit_grad(probs: &[f64], temperature: f64) -> Vec<f64> {
    let plogp = |p: f64| if p > 0.0 { p * p.ln() } else { 0.0 };
    let entropy: f64 = -probs.iter().map(|&p| plogp(p)).sum::<f64>();
    probs
        .iter()
        .map(|&p| -(plogp(p) + p * entropy) / temperature)
        .collect()
}

/// Accumulates `scale * d(f)/d(params)` into `grad`, given `d f / d logits`.
pub(crate) fn backward(
    p: &SenderParams,
    cache: &SenderCache,
    x_target: &[f64],
    x_distractor: &[f64],
    dlogits: &[f64],
    scale: f64,
    grad: &mut SenderGradient,
) {
    let h = p.hidden();
    crate::numerics::axpy(scale, dlogits, &mut grad.b_vocab);
    let concat: Vec<f64> = cache.u_target.iter().chain(&cache.u_distractor).copied().collect();
    grad.w_vocab.add_outer(scale, dlogits, &concat);
    let du = p.w_vocab.matvec_t(dlogits);
    let dz = |u: &[f64], du: &[f64]| -> Vec<f64> {
        u.iter().zip(du).map(|(u, g)| g * u * (1.0 - u)).collect()
    };
    let dz_target = dz(&cache.u_target, &du[..h]);
    let dz_distractor = dz(&cache.u_distractor, &du[h..]);
    grad.w_img.add_outer(scale, &dz_target, x_target);
    grad.w_img.add_outer(scale, &dz_distractor, x_distractor);
}

/// Exact gradient of `log probs[symbol]` with respect to every Sender tensor.
pub fn sender_grad_logp(
    p: &SenderParams,
    out: &SenderOutput,
    x_target: &[f64],
    x_distractor: &[f64],
) -> Result<SenderGradient> {
    let (probs, cache) = sender_policy(p, x_target, x_distractor)?;
    if cache != out.cache || out.probs.len() != probs.len() || out.symbol >= probs.len() {
        return Err(Error::Parameter(
            "sender output was not produced by these parameters and inputs".into(),
        ));
    }
    let mut grad = SenderGradient::zeros_like(p);
    let dlogits = logp_logit_grad(&probs, out.symbol, p.temperature);
    backward(p, &cache, x_target, x_distractor, &dlogits, 1.0, &mut grad);
    Ok(grad)
}

/// Exact gradient of the Shannon entropy of the symbol distribution.
pub fn sender_grad_entropy(p: &SenderParams, x_target: &[f64], x_distractor: &[f64]) -> Result<SenderGradient> {
    let (probs, cache) = sender_policy(p, x_target, x_distractor)?;
    let mut grad = SenderGradient::zeros_like(p);
    let dlogits = entropy_logit_grad(&probs, p.temperature);
    backward(p, &cache, x_target, x_distractor, &dlogits, 1.0, &mut grad);
    Ok(grad)
}
