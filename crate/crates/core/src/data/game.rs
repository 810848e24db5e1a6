use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::FeatureStore;
use crate::error::{Error, Result};
use crate::numerics::{l2_normalize, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameMode {
    SameImage,
    DifferentImage,
    Noise,
}

impl GameMode {
    pub fn as_str(self) -> &'static str {
        match self {
            GameMode::SameImage => "same-image",
            GameMode::DifferentImage => "different-image",
            GameMode::Noise => "noise",
        }
    }
}

impl fmt::Display for GameMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "same" | "same-image" => Ok(GameMode::SameImage),
            "diff" | "different" | "different-image" => Ok(GameMode::DifferentImage),
            "noise" => Ok(GameMode::Noise),
            other => Err(Error::Config(format!("unknown game mode {other:?}"))),
        }
    }
}

/// One round of the referential game.
///
/// The Sender always sees `(sender_target, sender_distractor)` in that
/// order. The Receiver sees `(receiver_left, receiver_right)`; the target
/// concept sits at `target_position`. In noise mode the four indices
/// address the two payload vectors instead of store rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GameInstance {
    pub mode: GameMode,
    pub sender_target: usize,
    pub sender_distractor: usize,
    pub receiver_left: usize,
    pub receiver_right: usize,
    pub target_position: usize,
    pub noise: Option<Box<[Vec<f64>; 2]>>,
}

/// Borrowed input vectors for one game.
#[derive(Debug, Clone, Copy)]
pub struct GameViews<'a> {
    pub sender_target: &'a [f64],
    pub sender_distractor: &'a [f64],
    pub receiver_left: &'a [f64],
    pub receiver_right: &'a [f64],
}

impl<'a> GameViews<'a> {
    pub fn receiver(&self) -> [&'a [f64]; 2] {
        [self.receiver_left, self.receiver_right]
    }
}

impl GameInstance {
    pub fn receiver_rows(&self) -> [usize; 2] {
        [self.receiver_left, self.receiver_right]
    }

    /// Resolves the instance's inputs. Image modes need the store.
    pub fn views<'a>(&'a self, store: Option<&'a FeatureStore>) -> Result<GameViews<'a>> {
        match (&self.noise, store) {
            (Some(payload), _) => Ok(GameViews {
                sender_target: &payload[self.sender_target],
                sender_distractor: &payload[self.sender_distractor],
                receiver_left: &payload[self.receiver_left],
                receiver_right: &payload[self.receiver_right],
            }),
            (None, Some(store)) => {
                for &r in &[
                    self.sender_target,
                    self.sender_distractor,
                    self.receiver_left,
                    self.receiver_right,
                ] {
                    if r >= store.len() {
                        return Err(Error::Dataset(format!(
                            "row {r} out of range for store of {} rows",
                            store.len()
                        )));
                    }
                }
                Ok(GameViews {
                    sender_target: store.row(self.sender_target),
                    sender_distractor: store.row(self.sender_distractor),
                    receiver_left: store.row(self.receiver_left),
                    receiver_right: store.row(self.receiver_right),
                })
            }
            (None, None) => Err(Error::Dataset(format!(
                "{} game needs a feature store",
                self.mode
            ))),
        }
    }

    /// Checks the mode's structural invariants; returns a description of
    /// the first violation.
    pub fn check(&self, store: Option<&FeatureStore>) -> std::result::Result<(), String> {
        if self.target_position > 1 {
            return Err(format!("target position {}", self.target_position));
        }
        let receiver_target = self.receiver_rows()[self.target_position];
        let receiver_distractor = self.receiver_rows()[1 - self.target_position];
        match self.mode {
            GameMode::Noise => {
                let payload = self.noise.as_ref().ok_or("noise game without payload")?;
                for v in payload.iter() {
                    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if (n - 1.0).abs() > 1e-9 {
                        return Err(format!("payload norm {n}"));
                    }
                }
                if self.sender_target == self.sender_distractor {
                    return Err("sender sees one payload vector twice".into());
                }
                if receiver_target != self.sender_target || receiver_distractor != self.sender_distractor {
                    return Err("receiver payload order inconsistent with target position".into());
                }
                Ok(())
            }
            GameMode::SameImage | GameMode::DifferentImage => {
                let store = store.ok_or("image game checked without store")?;
                if self.noise.is_some() {
                    return Err("image game carries a noise payload".into());
                }
                let concept = |r: usize| store.concept(r);
                if concept(self.sender_target) == concept(self.sender_distractor) {
                    return Err("target and distractor share a concept".into());
                }
                if self.mode == GameMode::SameImage {
                    if receiver_target != self.sender_target
                        || receiver_distractor != self.sender_distractor
                    {
                        return Err("receiver rows differ from sender rows".into());
                    }
                } else {
                    let sender = [self.sender_target, self.sender_distractor];
                    if self.receiver_rows().iter().any(|r| sender.contains(r)) {
                        return Err("receiver shares a row with sender".into());
                    }
                    if concept(receiver_target) != concept(self.sender_target)
                        || concept(receiver_distractor) != concept(self.sender_distractor)
                    {
                        return Err("receiver concepts do not match sender concepts".into());
                    }
                }
                Ok(())
            }
        }
    }
}

/// A set of rows grouped by concept, from which games are drawn.
#[derive(Debug, Clone)]
pub struct ConceptPool {
    concepts: Vec<i64>,
    rows: Vec<Vec<usize>>,
}

impl ConceptPool {
    pub fn new(store: &FeatureStore, rows: &[usize]) -> Self {
        let mut grouped: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
        for &r in rows {
            grouped.entry(store.concept(r)).or_default().push(r);
        }
        let (concepts, rows) = grouped.into_iter().unzip();
        ConceptPool { concepts, rows }
    }

    pub fn empty() -> Self {
        ConceptPool {
            concepts: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn all(store: &FeatureStore) -> Self {
        Self::new(store, &(0..store.len()).collect::<Vec<_>>())
    }

    pub fn n_concepts(&self) -> usize {
        self.concepts.len()
    }

    pub fn concepts(&self) -> &[i64] {
        &self.concepts
    }

    pub fn rows_of(&self, concept_index: usize) -> &[usize] {
        &self.rows[concept_index]
    }

    fn require_concepts(&self) -> Result<()> {
        if self.concepts.len() < 2 {
            return Err(Error::Dataset(format!(
                "need at least 2 concepts, pool has {}",
                self.concepts.len()
            )));
        }
        Ok(())
    }

    fn concept_pair(&self, rng: &mut RngStream) -> (usize, usize) {
        let a = rng.below(self.concepts.len());
        let mut b = rng.below(self.concepts.len() - 1);
        if b >= a {
            b += 1;
        }
        (a, b)
    }

    fn pick(&self, concept: usize, rng: &mut RngStream) -> usize {
        let rows = &self.rows[concept];
        rows[rng.below(rows.len())]
    }

    fn pick_other(&self, concept: usize, avoid: usize, rng: &mut RngStream) -> usize {
        let rows = &self.rows[concept];
        let k = rows.iter().position(|&r| r == avoid).expect("row belongs to concept");
        let mut j = rng.below(rows.len() - 1);
        if j >= k {
            j += 1;
        }
        rows[j]
    }
}

fn arrange(
    mode: GameMode,
    sender: (usize, usize),
    receiver: (usize, usize),
    rng: &mut RngStream,
) -> GameInstance {
    let target_position = usize::from(rng.coin());
    let (receiver_left, receiver_right) = if target_position == 0 {
        receiver
    } else {
        (receiver.1, receiver.0)
    };
    GameInstance {
        mode,
        sender_target: sender.0,
        sender_distractor: sender.1,
        receiver_left,
        receiver_right,
        target_position,
        noise: None,
    }
}

/// Both agents see the same two images of distinct concepts.
pub fn sample_same_image_game(pool: &ConceptPool, rng: &mut RngStream) -> Result<GameInstance> {
    pool.require_concepts()?;
    let (a, b) = pool.concept_pair(rng);
    let target = pool.pick(a, rng);
    let distractor = pool.pick(b, rng);
    Ok(arrange(
        GameMode::SameImage,
        (target, distractor),
        (target, distractor),
        rng,
    ))
}

/// The Receiver sees other images of the Sender's two concepts.
pub fn sample_different_image_game(pool: &ConceptPool, rng: &mut RngStream) -> Result<GameInstance> {
    pool.require_concepts()?;
    if let Some(i) = pool.rows.iter().position(|r| r.len() < 2) {
        return Err(Error::Dataset(format!(
            "concept {} has a single image; different-image games need at least 2",
            pool.concepts[i]
        )));
    }
    let (a, b) = pool.concept_pair(rng);
    let target = pool.pick(a, rng);
    let distractor = pool.pick(b, rng);
    let r_target = pool.pick_other(a, target, rng);
    let r_distractor = pool.pick_other(b, distractor, rng);
    Ok(arrange(
        GameMode::DifferentImage,
        (target, distractor),
        (r_target, r_distractor),
        rng,
    ))
}

/// Two unit-normalized standard-normal vectors; no dataset involved.
pub fn sample_noise_game(dim: usize, rng: &mut RngStream) -> Result<GameInstance> {
    if dim < 2 {
        return Err(Error::Parameter(format!("noise dimension must be >= 2, got {dim}")));
    }
    let mut draw = || -> Result<Vec<f64>> {
        let v: Vec<f64> = (0..dim).map(|_| rng.standard_normal()).collect();
        l2_normalize(&v)
    };
    let payload = Box::new([draw()?, draw()?]);
    let target = usize::from(rng.coin());
    let mut game = arrange(GameMode::Noise, (target, 1 - target), (target, 1 - target), rng);
    game.noise = Some(payload);
    Ok(game)
}

pub fn sample_game(mode: GameMode, pool: &ConceptPool, dim: usize, rng: &mut RngStream) -> Result<GameInstance> {
    match mode {
        GameMode::SameImage => sample_same_image_game(pool, rng),
        GameMode::DifferentImage => sample_different_image_game(pool, rng),
        GameMode::Noise => sample_noise_game(dim, rng),
    }
}

/// Draws the fixed validation games reused by every evaluation in a run.
pub fn build_validation_set(
    pool: &ConceptPool,
    mode: GameMode,
    n: usize,
    rng: &mut RngStream,
) -> Result<Vec<GameInstance>> {
    if n == 0 {
        return Err(Error::Parameter("validation set size must be >= 1".into()));
    }
    if mode == GameMode::Noise {
        return Err(Error::Parameter("validation games are same-image or different-image".into()));
    }
    (0..n).map(|_| sample_game(mode, pool, 0, rng)).collect()
}
