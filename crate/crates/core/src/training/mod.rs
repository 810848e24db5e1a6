//! Reinforce training of the two agents.

mod config;
mod exact;
pub(crate) mod game;
mod optimizer;
mod reinforce;
mod run;

pub use config::TrainConfig;
pub use exact::{expected_reward_exact, expected_reward_grad_exact, ENUMERATION_LIMIT};
pub use game::{evaluate, play_game, TrajectoryRecord};
pub use optimizer::{Optimizer, OptimizerKind};
pub use reinforce::{reinforce_gradient, reinforce_update, BaselineState, PolicyGradient, UpdateOptions};
pub use run::{
    prepare_run, run_seed_sweep, train, worker_threads, RunSetup, TrainRunResult,
    ValidationRecord, SUCCESS_MVR, THREADS_ENV,
};
