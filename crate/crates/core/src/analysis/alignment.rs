use serde::{Deserialize, Serialize};

use crate::agents::{receiver_embed, sender_embed, ReceiverParams, SenderParams};
use crate::analysis::SimilarityProfile;
use crate::data::FeatureStore;
use crate::error::{Error, Result};

/// The three RSA scores between input, Sender and Receiver spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentReport {
    pub rho_sr: f64,
    pub rho_si: f64,
    pub rho_ri: f64,
    pub n_items: usize,
    pub n_pairs: usize,
    /// SHA-256 over the probe row indices.
    pub probe_id: String,
    pub checkpoint_id: Option<String>,
}

pub fn probe_id(rows: &[usize]) -> String {
    let bytes: Vec<u8> = rows.iter().flat_map(|r| (*r as u64).to_le_bytes()).collect();
    crate::agents::sha256_hex(&bytes)
}

/// Representations of the probe rows in the three spaces.
#[derive(Debug, Clone)]
pub struct ProbeEmbeddings {
    pub input: Vec<Vec<f64>>,
    pub sender: Vec<Vec<f64>>,
    pub receiver: Vec<Vec<f64>>,
}

pub fn embed_probe(
    store: &FeatureStore,
    sender: &SenderParams,
    receiver: &ReceiverParams,
    rows: &[usize],
) -> Result<ProbeEmbeddings> {
    if rows.is_empty() {
        return Err(Error::Parameter("empty probe set".into()));
    }
    let mut out = ProbeEmbeddings {
        input: Vec::with_capacity(rows.len()),
        sender: Vec::with_capacity(rows.len()),
        receiver: Vec::with_capacity(rows.len()),
    };
    for &r in rows {
        if r >= store.len() {
            return Err(Error::Dataset(format!("probe row {r} out of range")));
        }
        let x = store.row(r);
        out.input.push(x.to_vec());
        out.sender.push(sender_embed(sender, x)?);
        out.receiver.push(receiver_embed(receiver, x)?);
    }
    Ok(out)
}

/// RSA triple from precomputed representations.
pub fn alignment_from_reps<I, S, R>(input: &[I], sender: &[S], receiver: &[R]) -> Result<AlignmentReport>
where
    I: AsRef<[f64]>,
    S: AsRef<[f64]>,
    R: AsRef<[f64]>,
{
    let i = SimilarityProfile::new(input)?;
    let s = SimilarityProfile::new(sender)?;
    let r = SimilarityProfile::new(receiver)?;
    let sr = s.rsa(&r)?;
    Ok(AlignmentReport {
        rho_sr: sr.rho,
        rho_si: s.rsa(&i)?.rho,
        rho_ri: r.rsa(&i)?.rho,
        n_items: sr.n_items,
        n_pairs: sr.n_pairs,
        probe_id: String::new(),
        checkpoint_id: None,
    })
}

/// Embeds the probe rows with both agents and scores all three space pairs.
pub fn alignment_report(
    store: &FeatureStore,
    sender: &SenderParams,
    receiver: &ReceiverParams,
    probe_rows: &[usize],
) -> Result<AlignmentReport> {
    let reps = embed_probe(store, sender, receiver, probe_rows)?;
    let mut report = alignment_from_reps(&reps.input, &reps.sender, &reps.receiver)?;
    report.probe_id = probe_id(probe_rows);
    Ok(report)
}
