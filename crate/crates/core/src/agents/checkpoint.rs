//! LGCK checkpoints.
//!
//! ```text
//! "LGCK" | u32 version = 1 | u32 metadata length | metadata JSON (UTF-8)
//! | W_img | W_vocab | b_vocab | U_img | E_sym    (f64 little-endian, row-major)
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::agents::{ReceiverParams, SenderParams};
use crate::data::GameMode;
use crate::error::{Error, Result};
use crate::numerics::Mat64;

pub const LGCK_MAGIC: &[u8; 4] = b"LGCK";
pub const LGCK_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckpointMeta {
    pub d: usize,
    pub h: usize,
    #[serde(rename = "V")]
    pub vocab: usize,
    pub tau: f64,
    pub seed: u64,
    pub game_mode: GameMode,
    pub batches_trained: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub meta: CheckpointMeta,
    pub sender: SenderParams,
    pub receiver: ReceiverParams,
}

impl Checkpoint {
    pub fn new(sender: SenderParams, receiver: ReceiverParams, seed: u64, game_mode: GameMode, batches_trained: u64) -> Self {
        Checkpoint {
            meta: CheckpointMeta {
                d: sender.dim(),
                h: sender.hidden(),
                vocab: sender.vocab(),
                tau: sender.temperature,
                seed,
                game_mode,
                batches_trained,
            },
            sender,
            receiver,
        }
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        let meta = serde_json::to_vec(&self.meta)?;
        let mut out = Vec::new();
        out.extend_from_slice(LGCK_MAGIC);
        out.extend_from_slice(&LGCK_VERSION.to_le_bytes());
        out.extend_from_slice(&(meta.len() as u32).to_le_bytes());
        out.extend_from_slice(&meta);
        for tensor in [
            self.sender.w_img.as_slice(),
            self.sender.w_vocab.as_slice(),
            &self.sender.b_vocab,
            self.receiver.u_img.as_slice(),
            self.receiver.e_sym.as_slice(),
        ] {
            for x in tensor {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        Ok(out)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 12 || &bytes[..4] != LGCK_MAGIC {
            return Err(Error::format("not an LGCK checkpoint"));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        if word(4) != LGCK_VERSION {
            return Err(Error::format(format!("unsupported LGCK version {}", word(4))));
        }
        let meta_len = word(8) as usize;
        let meta_end = 12 + meta_len;
        if bytes.len() < meta_end {
            return Err(Error::format("truncated checkpoint metadata"));
        }
        let meta: CheckpointMeta = serde_json::from_slice(&bytes[12..meta_end])
            .map_err(|e| Error::format(format!("checkpoint metadata: {e}")))?;
        let (d, h, v) = (meta.d, meta.h, meta.vocab);
        let sizes = [h * d, v * 2 * h, v, h * d, h * v];
        let expected = meta_end + sizes.iter().sum::<usize>() * 8;
        if bytes.len() != expected {
            return Err(Error::format(format!(
                "checkpoint holds {} bytes, metadata implies {expected}",
                bytes.len()
            )));
        }
        let mut cursor = meta_end;
        let mut take = |n: usize| -> Vec<f64> {
            let out = bytes[cursor..cursor + n * 8]
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            cursor += n * 8;
            out
        };
        let w_img = Mat64::from_vec(h, d, take(sizes[0]))?;
        let w_vocab = Mat64::from_vec(v, 2 * h, take(sizes[1]))?;
        let b_vocab = take(sizes[2]);
        let u_img = Mat64::from_vec(h, d, take(sizes[3]))?;
        let e_sym = Mat64::from_vec(h, v, take(sizes[4]))?;
        let sender = SenderParams {
            w_img,
            w_vocab,
            b_vocab,
            temperature: meta.tau,
        };
        let receiver = ReceiverParams { u_img, e_sym };
        sender.validate()?;
        receiver.validate()?;
        Ok(Checkpoint {
            meta,
            sender,
            receiver,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.encode()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode(&bytes)
    }
}

/// Hex SHA-256 of a byte string, used as a provenance id.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
