//! Networks, datasets, inference, and training.

mod dataset;
pub(crate) mod io;
mod train;

pub use dataset::Dataset;
pub use io::{load_network, save_network};
pub use train::{train_mlp, TrainConfig};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-layer activation. Hidden layers default to ReLU, the output layer
/// to Identity (a linear classifier head).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Identity,
}

impl Activation {
    fn apply<T: Scalar>(self, z: T) -> T {
        match self {
            Activation::Relu => z.max(T::zero()),
            Activation::Identity => z,
        }
    }
}

/// One dense layer: `y = act(W·x + b)` with `W` stored row-major, out×in.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer<T> {
    weights: Vec<Vec<T>>,
    bias: Vec<T>,
    activation: Activation,
}

impl<T: Scalar> Layer<T> {
    pub fn new(weights: Vec<Vec<T>>, bias: Vec<T>, activation: Activation) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Schema("layer has no output rows".into()));
        }
        let in_dim = weights[0].len();
        if in_dim == 0 {
            return Err(Error::Schema("layer has zero input width".into()));
        }
        for row in &weights {
            if row.len() != in_dim {
                return Err(Error::Schema("ragged weight matrix".into()));
            }
            if row.iter().any(|w| !w.is_finite()) {
                return Err(Error::NonFinite("layer weights"));
            }
        }
        if bias.len() != weights.len() {
            return Err(Error::Schema(format!(
                "bias length {} does not match {} output rows",
                bias.len(),
                weights.len()
            )));
        }
        if bias.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite("layer bias"));
        }
        Ok(Self {
            weights,
            bias,
            activation,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.weights[0].len()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<T>] {
        &self.weights
    }

    pub fn bias(&self) -> &[T] {
        &self.bias
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    /// Apply the layer. The dot product accumulates in ascending index
    /// order; every consumer of network outputs (inference, training,
    /// verification witnesses) relies on this order being fixed so that
    /// repeated evaluations are bit-identical.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.in_dim());
        let mut out = Vec::with_capacity(self.out_dim());
        for (row, b) in self.weights.iter().zip(&self.bias) {
            let mut acc = T::zero();
            for (w, xi) in row.iter().zip(x) {
                acc = acc + *w * *xi;
            }
            out.push(self.activation.apply(acc + *b));
        }
        out
    }
}

/// A feedforward classifier: a chain of dense layers whose last output
/// width is the number of classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    layers: Vec<Layer<T>>,
    input_dim: usize,
}

impl<T: Scalar> Network<T> {
    pub fn new(input_dim: usize, layers: Vec<Layer<T>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Schema("network has no layers".into()));
        }
        let mut expected = input_dim;
        for (i, layer) in layers.iter().enumerate() {
            if layer.in_dim() != expected {
                return Err(Error::LayerShape {
                    layer: i,
                    expected,
                    got: layer.in_dim(),
                });
            }
            expected = layer.out_dim();
        }
        Ok(Self { layers, input_dim })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    /// Number of classes: the width of the last layer.
    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("nonempty").out_dim()
    }

    pub fn layers(&self) -> &[Layer<T>] {
        &self.layers
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    fn check_input(&self, x: &[T]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::Dimension {
                expected: self.input_dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Logits for one input, computed layer by layer. Deterministic:
    /// identical inputs give bit-identical outputs.
    pub fn forward(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_input(x)?;
        let mut h = self.layers[0].apply(x);
        for layer in &self.layers[1..] {
            h = layer.apply(&h);
        }
        Ok(h)
    }

    /// Index of the maximal logit; ties break toward the lowest index.
    pub fn predict(&self, x: &[T]) -> Result<usize> {
        Ok(argmax(&self.forward(x)?))
    }

    /// Fraction of dataset samples whose prediction matches the label.
    pub fn accuracy(&self, data: &Dataset<T>) -> Result<f64> {
        if data.input_dim() != self.input_dim {
            return Err(Error::Dimension {
                expected: self.input_dim,
                got: data.input_dim(),
            });
        }
        let mut hits = 0usize;
        for (x, label) in data.iter() {
            if self.predict(x)? == label {
                hits += 1;
            }
        }
        Ok(hits as f64 / data.len() as f64)
    }
}

/// Argmax with ties broken toward the lowest index.
pub fn argmax<T: Scalar>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layer(w: &[&[f64]], b: &[f64], act: Activation) -> Layer<f64> {
        Layer::new(
            w.iter().map(|r| r.to_vec()).collect(),
            b.to_vec(),
            act,
        )
        .unwrap()
    }

    fn identity2() -> Network<f64> {
        Network::new(
            2,
            vec![layer(
                &[&[1.0, 0.0], &[0.0, 1.0]],
                &[0.0, 0.0],
                Activation::Identity,
            )],
        )
        .unwrap()
    }

    #[test]
    fn forward_identity_layer() {
        let net = identity2();
        assert_eq!(net.forward(&[0.3, 0.7]).unwrap(), vec![0.3, 0.7]);
    }

    #[test]
    fn forward_relu_clamps_negative_preactivation() {
        // 0.2 - 0.5 - 1 = -1.3, ReLU -> 0
        let net = Network::new(
            2,
            vec![layer(&[&[1.0, -1.0]], &[-1.0], Activation::Relu)],
        )
        .unwrap();
        assert_eq!(net.forward(&[0.2, 0.5]).unwrap(), vec![0.0]);
    }

    #[test]
    fn forward_two_layer_hand_evaluation() {
        let net = Network::new(
            2,
            vec![
                layer(&[&[2.0, 0.0], &[0.0, 2.0]], &[0.0, 0.0], Activation::Relu),
                layer(&[&[1.0, 1.0]], &[1.0], Activation::Identity),
            ],
        )
        .unwrap();
        assert_eq!(net.forward(&[0.5, -0.25]).unwrap(), vec![2.0]);
    }

    #[test]
    fn forward_dimension_mismatch() {
        let net = identity2();
        assert!(matches!(
            net.forward(&[1.0]),
            Err(Error::Dimension { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn predict_breaks_ties_toward_lowest_index() {
        assert_eq!(argmax(&[0.5, 0.5, 0.1]), 0);
        assert_eq!(argmax(&[-1.0, 3.0, 2.0]), 1);
        let net = identity2();
        assert_eq!(net.predict(&[0.1, 0.9]).unwrap(), 1);
    }

    #[test]
    fn zero_network_predicts_class_zero() {
        let net = Network::new(
            3,
            vec![layer(
                &[&[0.0; 3], &[0.0; 3], &[0.0; 3], &[0.0; 3]],
                &[0.0; 4],
                Activation::Identity,
            )],
        )
        .unwrap();
        assert_eq!(net.forward(&[0.3, -0.2, 0.9]).unwrap(), vec![0.0; 4]);
        assert_eq!(net.predict(&[0.3, -0.2, 0.9]).unwrap(), 0);
    }

    #[test]
    fn predict_invariant_under_constant_bias_shift_on_identity_head() {
        let base = Network::new(
            2,
            vec![
                layer(&[&[1.5, -0.3], &[0.2, 0.8]], &[0.1, -0.4], Activation::Relu),
                layer(
                    &[&[1.0, -1.0], &[0.5, 0.5], &[-0.2, 1.1]],
                    &[0.0, 0.3, -0.1],
                    Activation::Identity,
                ),
            ],
        )
        .unwrap();
        let shifted = Network::new(
            2,
            vec![
                base.layers()[0].clone(),
                layer(
                    &[&[1.0, -1.0], &[0.5, 0.5], &[-0.2, 1.1]],
                    &[7.0, 7.3, 6.9],
                    Activation::Identity,
                ),
            ],
        )
        .unwrap();
        for k in 0..50 {
            let x = [k as f64 * 0.04 - 1.0, 1.0 - k as f64 * 0.03];
            assert_eq!(base.predict(&x).unwrap(), shifted.predict(&x).unwrap());
        }
    }

    #[test]
    fn layer_composition_matches_split_evaluation() {
        let l1 = layer(&[&[0.7, -1.2], &[0.4, 0.9]], &[0.2, -0.1], Activation::Relu);
        let l2 = layer(&[&[1.0, 0.5]], &[-0.3], Activation::Identity);
        let whole = Network::new(2, vec![l1.clone(), l2.clone()]).unwrap();
        let front = Network::new(2, vec![l1]).unwrap();
        let back = Network::new(2, vec![l2]).unwrap();
        let x = [0.35, 0.6];
        let mid = front.forward(&x).unwrap();
        assert_eq!(whole.forward(&x).unwrap(), back.forward(&mid).unwrap());
    }

    #[test]
    fn forward_is_deterministic() {
        let net = Network::new(
            2,
            vec![
                layer(&[&[0.3, 1.7], &[-0.9, 0.1]], &[0.01, 0.02], Activation::Relu),
                layer(&[&[0.5, -0.5], &[1.0, 1.0]], &[0.0, 0.0], Activation::Identity),
            ],
        )
        .unwrap();
        let x = [0.123456789, -0.987654321];
        let a = net.forward(&x).unwrap();
        let b = net.forward(&x).unwrap();
        assert!(a.iter().zip(&b).all(|(p, q)| p.to_bits() == q.to_bits()));
    }

    #[test]
    fn network_rejects_inconsistent_shapes() {
        let l1 = layer(&[&[1.0, 0.0]; 5], &[0.0; 5], Activation::Relu);
        let l2 = layer(&[&[1.0, 0.0, 0.0, 0.0]; 3], &[0.0; 3], Activation::Identity);
        let err = Network::new(2, vec![l1, l2]).unwrap_err();
        match err {
            Error::LayerShape { layer, expected, got } => {
                assert_eq!((layer, expected, got), (1, 5, 4));
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn network_rejects_empty_layer_list() {
        assert!(Network::<f64>::new(2, vec![]).is_err());
    }

    #[test]
    fn f32_instantiation_tracks_f64() {
        let net64 = Network::new(
            2,
            vec![layer(&[&[0.5, -0.25], &[1.0, 0.75]], &[0.1, -0.2], Activation::Relu)],
        )
        .unwrap();
        let net32 = Network::<f32>::new(
            2,
            vec![Layer::new(
                vec![vec![0.5, -0.25], vec![1.0, 0.75]],
                vec![0.1, -0.2],
                Activation::Relu,
            )
            .unwrap()],
        )
        .unwrap();
        let y64 = net64.forward(&[0.3, 0.6]).unwrap();
        let y32 = net32.forward(&[0.3, 0.6]).unwrap();
        for (a, b) in y64.iter().zip(&y32) {
            assert!((a - *b as f64).abs() < 1e-6);
        }
    }
}
