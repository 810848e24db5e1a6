use serde::{Deserialize, Serialize};

use crate::agents::{init_agents, sender_embed_unchecked, ReceiverParams, SenderParams};
use crate::analysis::{select_probe, SimilarityProfile};
use crate::data::{
    build_validation_set, sample_game, split_store, ConceptPool, FeatureStore, GameInstance,
    GameMode, SplitSpec,
};
use crate::error::{Error, Result};
use crate::numerics::{RngStream, Stream};
use crate::training::game::play_views;
use crate::training::{evaluate, reinforce_gradient, BaselineState, Optimizer, TrainConfig, TrajectoryRecord};

/// Final MVR at or above this marks a run as successful.
pub const SUCCESS_MVR: f64 = 0.80;

/// Environment variable capping sweep worker threads.
pub const THREADS_ENV: &str = "LEWISGAME_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub batch: u64,
    pub mvr: f64,
    pub rsa_sr: Option<f64>,
    pub rsa_si: Option<f64>,
    pub rsa_ri: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainRunResult {
    pub seed: u64,
    pub mode: GameMode,
    pub sender: SenderParams,
    pub receiver: ReceiverParams,
    pub curve: Vec<ValidationRecord>,
    pub final_mvr: f64,
    pub success: bool,
    pub batches_trained: u64,
}

/// Everything about a run that is fixed by `(config, seed, store)` before
/// the first update: the row split, the training pool, the validation games
/// and the RSA probe rows.
#[derive(Debug, Clone)]
pub struct RunSetup {
    pub split: SplitSpec,
    pub train_pool: ConceptPool,
    pub validation: Vec<GameInstance>,
    pub curve_probe: Vec<usize>,
}

pub fn prepare_run(config: &TrainConfig, store: &FeatureStore) -> Result<RunSetup> {
    config.validate()?;
    if store.dim() != config.dim {
        return Err(Error::Dimension {
            expected: config.dim,
            got: store.dim(),
            context: "feature store dimensionality",
        });
    }
    let seed = config.seed;
    let split = split_store(store, &config.split, &mut RngStream::named(config.split.seed, Stream::Split));
    let train_pool = ConceptPool::new(store, &split.train);
    // tiny stores may not leave a usable validation split
    let val_pool = ConceptPool::new(store, &split.validation);
    let usable = val_pool.n_concepts() >= 2
        && (config.mode != GameMode::DifferentImage
            || (0..val_pool.n_concepts()).all(|c| val_pool.rows_of(c).len() >= 2));
    let val_pool = if usable { val_pool } else { train_pool.clone() };
    let validation = build_validation_set(
        &val_pool,
        config.mode,
        config.validation_pairs,
        &mut RngStream::named(seed, Stream::Validation),
    )?;
    let probe_source = if split.test.len() >= 3 { &split.test } else { &split.train };
    let curve_probe = select_probe(
        probe_source,
        config.curve_probe_size,
        &mut RngStream::named(seed, Stream::Probe),
    );
    Ok(RunSetup {
        split,
        train_pool,
        validation,
        curve_probe,
    })
}

struct CurveProbe<'a> {
    store: &'a FeatureStore,
    rows: &'a [usize],
    input: Option<SimilarityProfile>,
}

impl CurveProbe<'_> {
    fn rsa(&self, sender: &SenderParams, receiver: &ReceiverParams) -> [Option<f64>; 3] {
        let Some(input) = &self.input else {
            return [None; 3];
        };
        let s: Vec<Vec<f64>> = self.rows.iter().map(|&r| sender_embed_unchecked(sender, self.store.row(r))).collect();
        let r: Vec<Vec<f64>> = self.rows.iter().map(|&r| receiver.u_img.matvec(self.store.row(r))).collect();
        let (Ok(s), Ok(r)) = (SimilarityProfile::new(&s), SimilarityProfile::new(&r)) else {
            return [None; 3];
        };
        [
            s.rsa(&r).ok().map(|x| x.rho),
            s.rsa(input).ok().map(|x| x.rho),
            r.rsa(input).ok().map(|x| x.rho),
        ]
    }
}

/// Trains one Sender/Receiver pair with Reinforce.
pub fn train(config: &TrainConfig, store: &FeatureStore) -> Result<TrainRunResult> {
    let setup = prepare_run(config, store)?;
    let seed = config.seed;
    let (mut sender, mut receiver) = init_agents(
        config.dim,
        config.hidden,
        config.vocab_size,
        &mut RngStream::named(seed, Stream::Init),
    )?;
    sender.temperature = config.temperature;

    let probe_inputs: Vec<&[f64]> = setup.curve_probe.iter().map(|&r| store.row(r)).collect();
    let probe = CurveProbe {
        store,
        rows: &setup.curve_probe,
        input: if probe_inputs.len() >= 3 {
            SimilarityProfile::new(&probe_inputs).ok()
        } else {
            None
        },
    };
    let eval_rng = RngStream::named(seed, Stream::Eval);
    let record = |batch: u64, index: u64, sender: &SenderParams, receiver: &ReceiverParams| -> Result<ValidationRecord> {
        let mvr = evaluate(sender, receiver, &setup.validation, Some(store), &mut eval_rng.fork(index), 1)?;
        let [rsa_sr, rsa_si, rsa_ri] = probe.rsa(sender, receiver);
        Ok(ValidationRecord {
            batch,
            mvr,
            rsa_sr,
            rsa_si,
            rsa_ri,
        })
    };

    let mut curve = vec![record(0, 0, &sender, &receiver)?];
    let mut action_rng = RngStream::named(seed, Stream::Sampling);
    let mut game_rng = action_rng.fork(0);
    let mut baseline = BaselineState::new(config.baseline_decay);
    let mut sender_opt = Optimizer::new(config.optimizer, config.learning_rate, &sender);
    let mut receiver_opt = Optimizer::new(config.optimizer, config.learning_rate, &receiver);
    let mut batch = Vec::with_capacity(config.batch_size);
    for b in 1..=config.total_batches {
        batch.clear();
        for _ in 0..config.batch_size {
            let instance = sample_game(config.mode, &setup.train_pool, config.dim, &mut game_rng)?;
            let views = instance.views(Some(store))?;
            let (s, r, reward) = play_views(&sender, &receiver, &views, instance.target_position, &mut action_rng);
            batch.push(TrajectoryRecord {
                symbol: s.symbol,
                choice: r.choice,
                reward,
                sender: s,
                receiver: r,
                instance,
            });
        }
        let grad = reinforce_gradient(&sender, &receiver, &batch, Some(store), baseline.value, config.entropy_bonus)?;
        sender_opt.step(&mut sender, &grad.sender);
        receiver_opt.step(&mut receiver, &grad.receiver);
        baseline.observe(batch.iter().map(|t| t.reward).sum::<f64>() / batch.len() as f64);
        if b % config.validation_every == 0 || b == config.total_batches {
            let index = curve.len() as u64;
            curve.push(record(b, index, &sender, &receiver)?);
        }
    }

    let final_mvr = curve.last().map(|r| r.mvr).unwrap_or(0.0);
    Ok(TrainRunResult {
        seed,
        mode: config.mode,
        sender,
        receiver,
        curve,
        final_mvr,
        success: final_mvr >= SUCCESS_MVR,
        batches_trained: config.total_batches,
    })
}

/// Worker count for sweeps: `LEWISGAME_THREADS` if set, else all cores.
pub fn worker_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Independent runs with seeds `config.seed .. config.seed + n_seeds`,
/// returned in seed order.
pub fn run_seed_sweep(config: &TrainConfig, store: &FeatureStore, n_seeds: usize) -> Result<Vec<TrainRunResult>> {
    if n_seeds == 0 {
        return Err(Error::Parameter("seed sweep needs at least one seed".into()));
    }
    let configs: Vec<TrainConfig> = (0..n_seeds as u64)
        .map(|i| TrainConfig {
            seed: config.seed + i,
            ..config.clone()
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_threads().min(n_seeds))
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
    pool.install(|| {
        use rayon::prelude::*;
        configs.par_iter().map(|c| train(c, store)).collect()
    })
}
