use crate::agents::{ReceiverGradient, ReceiverParams};
use crate::error::{Error, Result};
use crate::numerics::{dot, sample_categorical_unchecked, softmax_unchecked, RngStream};

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverCache {
    pub v_left: Vec<f64>,
    pub v_right: Vec<f64>,
    pub e_symbol: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverOutput {
    /// Distribution over the two presented positions.
    pub probs: [f64; 2],
    pub choice: usize,
    pub log_prob: f64,
    pub cache: ReceiverCache,
}

fn check(p: &ReceiverParams, x_left: &[f64], x_right: &[f64], symbol: usize) -> Result<()> {
    if symbol >= p.vocab() {
        return Err(Error::Parameter(format!(
            "symbol {symbol} outside vocabulary of {}",
            p.vocab()
        )));
    }
    for x in [x_left, x_right] {
        if x.len() != p.dim() {
            return Err(Error::Dimension {
                expected: p.dim(),
                got: x.len(),
                context: "receiver image input",
            });
        }
    }
    Ok(())
}

pub(crate) fn policy_unchecked(
    p: &ReceiverParams,
    x_left: &[f64],
    x_right: &[f64],
    symbol: usize,
) -> ([f64; 2], ReceiverCache) {
    let v_left = p.u_img.matvec(x_left);
    let v_right = p.u_img.matvec(x_right);
    let e_symbol = p.e_sym.column(symbol);
    let scores = [dot(&v_left, &e_symbol), dot(&v_right, &e_symbol)];
    let probs = softmax_unchecked(&scores, 1.0);
    (
        [probs[0], probs[1]],
        ReceiverCache {
            v_left,
            v_right,
            e_symbol,
        },
    )
}

/// Distribution over the two positions given the received symbol.
pub fn receiver_policy(
    p: &ReceiverParams,
    x_left: &[f64],
    x_right: &[f64],
    symbol: usize,
) -> Result<([f64; 2], ReceiverCache)> {
    check(p, x_left, x_right, symbol)?;
    Ok(policy_unchecked(p, x_left, x_right, symbol))
}

pub fn receiver_forward(
    p: &ReceiverParams,
    x_left: &[f64],
    x_right: &[f64],
    symbol: usize,
    rng: &mut RngStream,
) -> Result<ReceiverOutput> {
    let (probs, cache) = receiver_policy(p, x_left, x_right, symbol)?;
    let choice = sample_categorical_unchecked(&probs, rng);
    Ok(ReceiverOutput {
        log_prob: probs[choice].ln(),
        probs,
        choice,
        cache,
    })
}

/// Forward pass with the choice fixed instead of sampled.
pub fn receiver_output_for(
    p: &ReceiverParams,
    x_left: &[f64],
    x_right: &[f64],
    symbol: usize,
    choice: usize,
) -> Result<ReceiverOutput> {
    if choice > 1 {
        return Err(Error::Parameter(format!("choice {choice} is not 0 or 1")));
    }
    let (probs, cache) = receiver_policy(p, x_left, x_right, symbol)?;
    Ok(ReceiverOutput {
        log_prob: probs[choice].ln(),
        probs,
        choice,
        cache,
    })
}

/// The Receiver's representation of one image: `U_img x`.
pub fn receiver_embed(p: &ReceiverParams, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != p.dim() {
        return Err(Error::Dimension {
            expected: p.dim(),
            got: x.len(),
            context: "receiver embed input",
        });
    }
    Ok(p.u_img.matvec(x))
}

/// Accumulates `scale * d(f)/d(params)` given `d f / d scores`.
pub(crate) fn backward(
    p: &ReceiverParams,
    cache: &ReceiverCache,
    x_left: &[f64],
    x_right: &[f64],
    symbol: usize,
    dscores: [f64; 2],
    scale: f64,
    grad: &mut ReceiverGradient,
) {
    let v = p.e_sym.cols();
    let e_sym = grad.e_sym.as_mut_slice();
    for (k, (l, r)) in cache.v_left.iter().zip(&cache.v_right).enumerate() {
        e_sym[k * v + symbol] += scale * (dscores[0] * l + dscores[1] * r);
    }
    grad.u_img.add_outer(scale * dscores[0], &cache.e_symbol, x_left);
    grad.u_img.add_outer(scale * dscores[1], &cache.e_symbol, x_right);
}

pub(crate) fn logp_score_grad(probs: [f64; 2], choice: usize) -> [f64; 2] {
    let mut g = [-probs[0], -probs[1]];
    g[choice] += 1.0;
    g
}

/// Exact gradient of `log probs[choice]` with respect to every Receiver tensor.
pub fn receiver_grad_logp(
    p: &ReceiverParams,
    out: &ReceiverOutput,
    x_left: &[f64],
    x_right: &[f64],
    symbol: usize,
) -> Result<ReceiverGradient> {
    let (probs, cache) = receiver_policy(p, x_left, x_right, symbol)?;
    if cache != out.cache || out.choice > 1 {
        return Err(Error::Parameter(
            "receiver output was not produced by these parameters and inputs".into(),
        ));
    }
    let mut grad = ReceiverGradient::zeros_like(p);
    backward(
        p,
        &cache,
        x_left,
        x_right,
        symbol,
        logp_score_grad(probs, out.choice),
        1.0,
        &mut grad,
    );
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Mat64;

    fn hand_receiver() -> ReceiverParams {
        ReceiverParams {
            u_img: Mat64::from_vec(1, 2, vec![1.0, 0.0]).unwrap(),
            e_sym: Mat64::from_vec(1, 1, vec![2.0]).unwrap(),
        }
    }

    #[test]
    fn hand_computed_forward() {
        let p = hand_receiver();
        let (probs, _) = receiver_policy(&p, &[1.0, 0.0], &[0.0, 1.0], 0).unwrap();
        let oracle = 2.0f64.exp() / (2.0f64.exp() + 1.0);
        assert!((probs[0] - oracle).abs() < 1e-15);
        assert!((probs[0] - 0.88080).abs() < 5e-6 && (probs[1] - 0.11920).abs() < 5e-6);
    }

    #[test]
    fn symmetric_cases_are_even() {
        let p = hand_receiver();
        // e orthogonal to both projections
        let (probs, _) = receiver_policy(&p, &[0.0, 1.0], &[0.0, -1.0], 0).unwrap();
        assert_eq!(probs, [0.5, 0.5]);
        let (probs, _) = receiver_policy(&p, &[0.6, 0.8], &[0.6, 0.8], 0).unwrap();
        assert_eq!(probs, [0.5, 0.5]);
    }

    #[test]
    fn symbol_out_of_range() {
        let p = hand_receiver();
        assert!(receiver_policy(&p, &[1.0, 0.0], &[0.0, 1.0], 1).is_err());
    }

    #[test]
    fn embed_is_linear_and_matches_cache() {
        let p = ReceiverParams {
            u_img: Mat64::from_vec(2, 2, vec![0.3, -1.2, 0.7, 0.1]).unwrap(),
            e_sym: Mat64::from_vec(2, 3, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap(),
        };
        let x = [0.6, 0.8];
        let half: Vec<f64> = x.iter().map(|v| 0.5 * v).collect();
        let a = receiver_embed(&p, &x).unwrap();
        let b = receiver_embed(&p, &half).unwrap();
        for (a, b) in a.iter().zip(&b) {
            assert!((0.5 * a - b).abs() < 1e-12);
        }
        let (_, cache) = receiver_policy(&p, &x, &[1.0, 0.0], 2).unwrap();
        assert_eq!(cache.v_left, a);
        let zero = ReceiverParams {
            u_img: Mat64::zeros(2, 2),
            e_sym: p.e_sym.clone(),
        };
        assert_eq!(receiver_embed(&zero, &x).unwrap(), vec![0.0, 0.0]);
    }
}
