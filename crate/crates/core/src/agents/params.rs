use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Mat64, RngStream};

/// Flat, ordered access to every scalar in a set of tensors. Used by the
/// optimizer and by finite-difference checks.
pub trait Tensors {
    fn tensors(&self) -> Vec<&[f64]>;
    fn tensors_mut(&mut self) -> Vec<&mut [f64]>;

    fn num_scalars(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    fn scalar(&self, mut k: usize) -> f64 {
        for t in self.tensors() {
            if k < t.len() {
                return t[k];
            }
            k -= t.len();
        }
        panic!("scalar index out of range");
    }

    fn set_scalar(&mut self, mut k: usize, v: f64) {
        for t in self.tensors_mut() {
            if k < t.len() {
                t[k] = v;
                return;
            }
            k -= t.len();
        }
        panic!("scalar index out of range");
    }

    fn flatten(&self) -> Vec<f64> {
        self.tensors().concat()
    }
}

/// `self += alpha * other`, tensor by tensor.
pub fn axpy_tensors<A: Tensors, B: Tensors>(alpha: f64, other: &B, target: &mut A) {
    for (dst, src) in target.tensors_mut().into_iter().zip(other.tensors()) {
        crate::numerics::axpy(alpha, src, dst);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenderParams {
    /// `h x d` image projection.
    pub w_img: Mat64,
    /// `V x 2h` map from `[u_target; u_distractor]` to symbol logits.
    pub w_vocab: Mat64,
    pub b_vocab: Vec<f64>,
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReceiverParams {
    /// `h x d` image projection.
    pub u_img: Mat64,
    /// `h x V` symbol embeddings, one column per symbol.
    pub e_sym: Mat64,
}

impl SenderParams {
    pub fn dim(&self) -> usize {
        self.w_img.cols()
    }

    pub fn hidden(&self) -> usize {
        self.w_img.rows()
    }

    pub fn vocab(&self) -> usize {
        self.w_vocab.rows()
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.hidden();
        if self.w_vocab.cols() != 2 * h {
            return Err(Error::Dimension {
                expected: 2 * h,
                got: self.w_vocab.cols(),
                context: "sender W_vocab columns",
            });
        }
        if self.b_vocab.len() != self.vocab() {
            return Err(Error::Dimension {
                expected: self.vocab(),
                got: self.b_vocab.len(),
                context: "sender b_vocab length",
            });
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::Parameter(format!("temperature {}", self.temperature)));
        }
        if !self.w_img.is_finite() || !self.w_vocab.is_finite() || self.b_vocab.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("non-finite sender weight".into()));
        }
        Ok(())
    }
}

impl ReceiverParams {
    pub fn dim(&self) -> usize {
        self.u_img.cols()
    }

    pub fn hidden(&self) -> usize {
        self.u_img.rows()
    }

    pub fn vocab(&self) -> usize {
        self.e_sym.cols()
    }

    pub fn validate(&self) -> Result<()> {
        if self.e_sym.rows() != self.hidden() {
            return Err(Error::Dimension {
                expected: self.hidden(),
                got: self.e_sym.rows(),
                context: "receiver E_sym rows",
            });
        }
        if !self.u_img.is_finite() || !self.e_sym.is_finite() {
            return Err(Error::Parameter("non-finite receiver weight".into()));
        }
        Ok(())
    }
}

impl Tensors for SenderParams {
    fn tensors(&self) -> Vec<&[f64]> {
        vec![self.w_img.as_slice(), self.w_vocab.as_slice(), &self.b_vocab]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![
            self.w_img.as_mut_slice(),
            self.w_vocab.as_mut_slice(),
            &mut self.b_vocab,
        ]
    }
}

impl Tensors for ReceiverParams {
    fn tensors(&self) -> Vec<&[f64]> {
        vec![self.u_img.as_slice(), self.e_sym.as_slice()]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![self.u_img.as_mut_slice(), self.e_sym.as_mut_slice()]
    }
}

/// Gradient with the shapes of [`SenderParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct SenderGradient {
    pub w_img: Mat64,
    pub w_vocab: Mat64,
    pub b_vocab: Vec<f64>,
}

/// Gradient with the shapes of [`ReceiverParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverGradient {
    pub u_img: Mat64,
    pub e_sym: Mat64,
}

impl SenderGradient {
    pub fn zeros_like(p: &SenderParams) -> Self {
        SenderGradient {
            w_img: Mat64::zeros(p.w_img.rows(), p.w_img.cols()),
            w_vocab: Mat64::zeros(p.w_vocab.rows(), p.w_vocab.cols()),
            b_vocab: vec![0.0; p.b_vocab.len()],
        }
    }
}

impl ReceiverGradient {
    pub fn zeros_like(p: &ReceiverParams) -> Self {
        ReceiverGradient {
            u_img: Mat64::zeros(p.u_img.rows(), p.u_img.cols()),
            e_sym: Mat64::zeros(p.e_sym.rows(), p.e_sym.cols()),
        }
    }
}

impl Tensors for SenderGradient {
    fn tensors(&self) -> Vec<&[f64]> {
        vec![self.w_img.as_slice(), self.w_vocab.as_slice(), &self.b_vocab]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![
            self.w_img.as_mut_slice(),
            self.w_vocab.as_mut_slice(),
            &mut self.b_vocab,
        ]
    }
}

impl Tensors for ReceiverGradient {
    fn tensors(&self) -> Vec<&[f64]> {
        vec![self.u_img.as_slice(), self.e_sym.as_slice()]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![self.u_img.as_mut_slice(), self.e_sym.as_mut_slice()]
    }
}

fn glorot(rows: usize, cols: usize, fan_in: usize, fan_out: usize, rng: &mut RngStream) -> Mat64 {
    let a = (6.0 / (fan_in + fan_out) as f64).sqrt();
    Mat64::from_fn(rows, cols, |_, _| rng.uniform_range(-a, a))
}

/// Glorot-uniform initialization. The Receiver's image projection is a copy
/// of the Sender's; the vocabulary bias starts at zero.
pub fn init_agents(
    dim: usize,
    hidden: usize,
    vocab: usize,
    rng: &mut RngStream,
) -> Result<(SenderParams, ReceiverParams)> {
    if dim == 0 || hidden == 0 || vocab == 0 {
        return Err(Error::Parameter(format!(
            "agent dimensions must be positive (d={dim}, h={hidden}, V={vocab})"
        )));
    }
    let w_img = glorot(hidden, dim, dim, hidden, rng);
    let w_vocab = glorot(vocab, 2 * hidden, 2 * hidden, vocab, rng);
    let e_sym = glorot(hidden, vocab, vocab, hidden, rng);
    let sender = SenderParams {
        w_img: w_img.clone(),
        w_vocab,
        b_vocab: vec![0.0; vocab],
        temperature: 1.0,
    };
    let receiver = ReceiverParams { u_img: w_img, e_sym };
    Ok((sender, receiver))
}
