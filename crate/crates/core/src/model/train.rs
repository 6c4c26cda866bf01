//! A small deterministic trainer for building reference networks.
//!
//! Full-batch gradient descent on softmax cross-entropy over a ReLU MLP
//! with an Identity head. No shuffling, no augmentation, no adaptive
//! steps: reproducibility beats speed at the scale this crate targets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Activation, Dataset, Layer, Network};
use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            epochs: 2000,
            seed: 7,
        }
    }
}

/// Train an MLP with the given hidden widths. Deterministic for a fixed
/// seed: Glorot-uniform init drawn from a ChaCha8 stream (always sampled
/// as `f64`, so the stream does not depend on `T`), zero biases.
pub fn train_mlp<T: Scalar>(
    data: &Dataset<T>,
    hidden: &[usize],
    cfg: &TrainConfig,
) -> Result<Network<T>> {
    if hidden.iter().any(|&w| w == 0) {
        return Err(Error::InvalidArgument("hidden widths must be positive".into()));
    }
    let classes = data.num_classes();
    if classes < 2 {
        return Err(Error::InvalidArgument("need at least two classes".into()));
    }

    let mut dims = vec![data.input_dim()];
    dims.extend_from_slice(hidden);
    dims.push(classes);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut weights: Vec<Vec<Vec<T>>> = Vec::new();
    let mut biases: Vec<Vec<T>> = Vec::new();
    for i in 0..dims.len() - 1 {
        let (fan_in, fan_out) = (dims[i], dims[i + 1]);
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        let w = (0..fan_out)
            .map(|_| {
                (0..fan_in)
                    .map(|_| cast::<T>(rng.gen_range(-limit..limit)))
                    .collect()
            })
            .collect();
        weights.push(w);
        biases.push(vec![T::zero(); fan_out]);
    }

    let n = data.len();
    let lr = cast::<T>(cfg.learning_rate / n as f64);
    let num_layers = dims.len() - 1;

    for epoch in 0..cfg.epochs {
        let mut grad_w: Vec<Vec<Vec<T>>> = weights
            .iter()
            .map(|w| w.iter().map(|row| vec![T::zero(); row.len()]).collect())
            .collect();
        let mut grad_b: Vec<Vec<T>> = biases.iter().map(|b| vec![T::zero(); b.len()]).collect();
        let mut loss = T::zero();

        for (x, label) in data.iter() {
            // forward, keeping post-activation values per layer
            let mut acts: Vec<Vec<T>> = Vec::with_capacity(num_layers + 1);
            acts.push(x.to_vec());
            for l in 0..num_layers {
                let input = &acts[l];
                let mut out = Vec::with_capacity(dims[l + 1]);
                for (row, b) in weights[l].iter().zip(&biases[l]) {
                    let mut acc = T::zero();
                    for (w, xi) in row.iter().zip(input) {
                        acc = acc + *w * *xi;
                    }
                    acc = acc + *b;
                    if l + 1 < num_layers {
                        acc = acc.max(T::zero());
                    }
                    out.push(acc);
                }
                acts.push(out);
            }

            // softmax cross-entropy on the logits
            let logits = acts.last().unwrap();
            let max = logits.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
            let mut exps: Vec<T> = logits.iter().map(|&z| (z - max).exp()).collect();
            let mut denom = T::zero();
            for e in &exps {
                denom = denom + *e;
            }
            for e in exps.iter_mut() {
                *e = *e / denom;
            }
            loss = loss - exps[label].max(cast::<T>(1e-300)).ln();

            // backprop: delta starts as softmax - onehot
            let mut delta: Vec<T> = exps;
            delta[label] = delta[label] - T::one();
            for l in (0..num_layers).rev() {
                let input = acts[l].clone();
                for (i, d) in delta.iter().enumerate() {
                    for (j, xi) in input.iter().enumerate() {
                        grad_w[l][i][j] += *d * *xi;
                    }
                    grad_b[l][i] += *d;
                }
                if l > 0 {
                    let mut prev = vec![T::zero(); dims[l]];
                    for (i, d) in delta.iter().enumerate() {
                        for (j, p) in prev.iter_mut().enumerate() {
                            *p += *d * weights[l][i][j];
                        }
                    }
                    // ReLU gate on the hidden activation
                    for (p, a) in prev.iter_mut().zip(&acts[l]) {
                        if *a <= T::zero() {
                            *p = T::zero();
                        }
                    }
                    delta = prev;
                }
            }
        }

        if !loss.is_finite() {
            return Err(Error::Diverged { epoch });
        }

        for l in 0..num_layers {
            for (row, grow) in weights[l].iter_mut().zip(&grad_w[l]) {
                for (w, g) in row.iter_mut().zip(grow) {
                    *w = *w - lr * *g;
                }
            }
            for (b, g) in biases[l].iter_mut().zip(&grad_b[l]) {
                *b = *b - lr * *g;
            }
        }
    }

    let layers = weights
        .into_iter()
        .zip(biases)
        .enumerate()
        .map(|(l, (w, b))| {
            let act = if l + 1 < num_layers {
                Activation::Relu
            } else {
                Activation::Identity
            };
            Layer::new(w, b, act)
        })
        .collect::<Result<Vec<_>>>()?;
    Network::new(dims[0], layers)
}
