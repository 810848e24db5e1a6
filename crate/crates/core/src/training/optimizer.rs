use serde::{Deserialize, Serialize};

use crate::agents::Tensors;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OptimizerKind {
    /// Plain gradient ascent.
    Sgd,
    Adam { beta1: f64, beta2: f64, epsilon: f64 },
}

impl OptimizerKind {
    pub fn adam() -> Self {
        OptimizerKind::Adam {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Per-tensor optimizer state for one parameter record.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimizer {
    kind: OptimizerKind,
    learning_rate: f64,
    step: u64,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
}

impl Optimizer {
    pub fn new<P: Tensors>(kind: OptimizerKind, learning_rate: f64, params: &P) -> Self {
        let zeros = || -> Vec<Vec<f64>> {
            match kind {
                OptimizerKind::Sgd => Vec::new(),
                OptimizerKind::Adam { .. } => params.tensors().iter().map(|t| vec![0.0; t.len()]).collect(),
            }
        };
        Optimizer {
            kind,
            learning_rate,
            step: 0,
            first: zeros(),
            second: zeros(),
        }
    }

    /// Ascends along `grad`.
    pub fn step<P: Tensors, G: Tensors>(&mut self, params: &mut P, grad: &G) {
        self.step += 1;
        match self.kind {
            OptimizerKind::Sgd => crate::agents::axpy_tensors(self.learning_rate, grad, params),
            OptimizerKind::Adam { beta1, beta2, epsilon } => {
                let c1 = 1.0 - beta1.powi(self.step.min(i32::MAX as u64) as i32);
                let c2 = 1.0 - beta2.powi(self.step.min(i32::MAX as u64) as i32);
                let lr = self.learning_rate;
                for (((p, g), m), v) in params
                    .tensors_mut()
                    .into_iter()
                    .zip(grad.tensors())
                    .zip(self.first.iter_mut())
                    .zip(self.second.iter_mut())
                {
                    for i in 0..p.len() {
                        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
                        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
                        p[i] += lr * (m[i] / c1) / ((v[i] / c2).sqrt() + epsilon);
                    }
                }
            }
        }
    }
}
