use serde::{Deserialize, Serialize};

use crate::analysis::pairwise_cosines;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftPair {
    pub image_a: String,
    pub image_b: String,
    pub sim_input: f64,
    pub sim_sender: f64,
    pub sim_receiver: f64,
    /// `sim_input - sim_sender`
    pub delta: f64,
}

/// Pairs whose similarity moved most between input and Sender space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    /// Largest positive deltas first: pairs pulled apart.
    pub drifted_apart: Vec<ShiftPair>,
    /// Most negative deltas first: pairs pushed together.
    pub drifted_together: Vec<ShiftPair>,
}

/// All pairs with their similarities in the three spaces, in canonical order.
pub fn shift_pairs<I, S, R>(input: &[I], sender: &[S], receiver: &[R], ids: &[String]) -> Result<Vec<ShiftPair>>
where
    I: AsRef<[f64]>,
    S: AsRef<[f64]>,
    R: AsRef<[f64]>,
{
    let n = input.len();
    if sender.len() != n || receiver.len() != n || ids.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: sender.len().min(receiver.len()).min(ids.len()),
            context: "shift-pair collections",
        });
    }
    let (si, ss, sr) = (
        pairwise_cosines(input)?,
        pairwise_cosines(sender)?,
        pairwise_cosines(receiver)?,
    );
    let mut out = Vec::with_capacity(si.len());
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            out.push(ShiftPair {
                image_a: ids[i].clone(),
                image_b: ids[j].clone(),
                sim_input: si[k],
                sim_sender: ss[k],
                sim_receiver: sr[k],
                delta: si[k] - ss[k],
            });
            k += 1;
        }
    }
    Ok(out)
}

/// Top `k` pairs in each drift direction; `k` larger than the pair count
/// truncates.
pub fn top_shift_pairs<I, S, R>(input: &[I], sender: &[S], receiver: &[R], ids: &[String], k: usize) -> Result<ShiftReport>
where
    I: AsRef<[f64]>,
    S: AsRef<[f64]>,
    R: AsRef<[f64]>,
{
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    let mut pairs = shift_pairs(input, sender, receiver, ids)?;
    // stable sort keeps canonical order among equal deltas
    pairs.sort_by(|a, b| b.delta.total_cmp(&a.delta));
    let apart = pairs.iter().take(k).cloned().collect();
    let together = pairs.iter().rev().take(k).cloned().collect();
    Ok(ShiftReport {
        drifted_apart: apart,
        drifted_together: together,
    })
}
