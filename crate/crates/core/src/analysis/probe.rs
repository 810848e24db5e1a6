use serde::{Deserialize, Serialize};

use crate::agents::{sender_policy_unchecked, Checkpoint, ReceiverParams, SenderParams};
use crate::data::{sample_game, ConceptPool, FeatureStore, GameMode};
use crate::error::{Error, Result};
use crate::numerics::{l2_normalize, RngStream};
use crate::training::game::{check_dims, play_views};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapTestResult {
    pub n_pairs: usize,
    pub runs: usize,
    pub changed: usize,
    pub fraction_changed: f64,
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn noise_vector(dim: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    let v: Vec<f64> = (0..dim).map(|_| rng.standard_normal()).collect();
    l2_normalize(&v)
}

/// For fresh noise pairs `(z1, z2)`, checks whether the Sender's most
/// probable symbol changes when the target role moves from `z1` to `z2`.
pub fn swap_test(sender: &SenderParams, dim: usize, n_pairs: usize, runs: usize, rng: &RngStream) -> Result<SwapTestResult> {
    if n_pairs == 0 || runs == 0 {
        return Err(Error::Parameter("swap test needs n_pairs >= 1 and runs >= 1".into()));
    }
    if dim != sender.dim() {
        return Err(Error::Dimension {
            expected: sender.dim(),
            got: dim,
            context: "swap-test noise dimensionality",
        });
    }
    let mut changed = 0;
    for run in 0..runs {
        let mut rng = rng.fork(run as u64);
        for _ in 0..n_pairs {
            let z1 = noise_vector(dim, &mut rng)?;
            let z2 = noise_vector(dim, &mut rng)?;
            let (forward, _) = sender_policy_unchecked(sender, &z1, &z2);
            let (swapped, _) = sender_policy_unchecked(sender, &z2, &z1);
            if argmax(&forward) != argmax(&swapped) {
                changed += 1;
            }
        }
    }
    Ok(SwapTestResult {
        n_pairs,
        runs,
        changed,
        fraction_changed: changed as f64 / (n_pairs * runs) as f64,
    })
}

/// Test-time protocol: `runs` independent runs of `batches x batch_size`
/// freshly sampled games.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalProtocol {
    pub runs: usize,
    pub batches: usize,
    pub batch_size: usize,
}

impl Default for EvalProtocol {
    fn default() -> Self {
        EvalProtocol {
            runs: 10,
            batches: 1000,
            batch_size: 32,
        }
    }
}

/// Mean reward of sampled play under `protocol`. Image modes draw from
/// `pool`; noise mode needs only `dim`.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_protocol(
    sender: &SenderParams,
    receiver: &ReceiverParams,
    mode: GameMode,
    pool: Option<&ConceptPool>,
    store: Option<&FeatureStore>,
    dim: usize,
    protocol: &EvalProtocol,
    rng: &RngStream,
) -> Result<f64> {
    let games = protocol.batches * protocol.batch_size;
    if protocol.runs == 0 || games == 0 {
        return Err(Error::Parameter("evaluation protocol plays no games".into()));
    }
    let empty = ConceptPool::empty();
    let pool = match (mode, pool) {
        (GameMode::Noise, _) => &empty,
        (_, Some(p)) => p,
        (_, None) => return Err(Error::Dataset(format!("{mode} evaluation needs a feature store"))),
    };
    let mut total = 0.0;
    for run in 0..protocol.runs {
        let mut game_rng = rng.fork(2 * run as u64);
        let mut action_rng = rng.fork(2 * run as u64 + 1);
        for _ in 0..games {
            let instance = sample_game(mode, pool, dim, &mut game_rng)?;
            let views = instance.views(store)?;
            check_dims(sender, receiver, &views)?;
            total += play_views(sender, receiver, &views, instance.target_position, &mut action_rng).2;
        }
    }
    Ok(total / (protocol.runs * games) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossEvalRow {
    pub train_mode: GameMode,
    pub checkpoint_id: Option<String>,
    pub same_image: Option<f64>,
    pub different_image: Option<f64>,
    pub noise: Option<f64>,
}

/// Percent mean rewards, train condition x test condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossEvalTable {
    pub protocol: EvalProtocol,
    pub rows: Vec<CrossEvalRow>,
}

impl CrossEvalTable {
    pub fn row(&self, mode: GameMode) -> Option<&CrossEvalRow> {
        self.rows.iter().find(|r| r.train_mode == mode)
    }
}

pub const TEST_MODES: [GameMode; 3] = [GameMode::SameImage, GameMode::DifferentImage, GameMode::Noise];

/// Evaluates each checkpoint on same-image, different-image and noise test
/// games. Rows without a checkpoint, and image columns without a store,
/// stay empty.
pub fn cross_eval(
    checkpoints: &[(&Checkpoint, Option<String>)],
    store: Option<&FeatureStore>,
    test_rows: &[usize],
    protocol: &EvalProtocol,
    rng: &RngStream,
) -> Result<CrossEvalTable> {
    let pool = store.map(|s| ConceptPool::new(s, test_rows));
    let mut rows = Vec::new();
    for (r, train_mode) in [GameMode::SameImage, GameMode::DifferentImage].into_iter().enumerate() {
        let mut matching = checkpoints.iter().filter(|(c, _)| c.meta.game_mode == train_mode);
        let Some((ck, id)) = matching.next() else {
            rows.push(CrossEvalRow {
                train_mode,
                checkpoint_id: None,
                same_image: None,
                different_image: None,
                noise: None,
            });
            continue;
        };
        if matching.next().is_some() {
            return Err(Error::Parameter(format!("more than one {train_mode} checkpoint")));
        }
        if let Some(s) = store {
            if s.dim() != ck.meta.d {
                return Err(Error::Dimension {
                    expected: ck.meta.d,
                    got: s.dim(),
                    context: "checkpoint vs feature store dimensionality",
                });
            }
        }
        let mut cells = [None; 3];
        for (c, test_mode) in TEST_MODES.into_iter().enumerate() {
            if test_mode != GameMode::Noise && store.is_none() {
                continue;
            }
            let cell_rng = rng.fork((3 * r + c) as u64);
            let mean = evaluate_protocol(
                &ck.sender,
                &ck.receiver,
                test_mode,
                pool.as_ref(),
                store,
                ck.meta.d,
                protocol,
                &cell_rng,
            )?;
            cells[c] = Some(100.0 * mean);
        }
        rows.push(CrossEvalRow {
            train_mode,
            checkpoint_id: id.clone(),
            same_image: cells[0],
            different_image: cells[1],
            noise: cells[2],
        });
    }
    if checkpoints.is_empty() {
        return Err(Error::Parameter("cross evaluation needs at least one checkpoint".into()));
    }
    Ok(CrossEvalTable {
        protocol: *protocol,
        rows,
    })
}
