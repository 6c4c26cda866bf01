//! Equivalence-preserving quantization of feedforward ReLU classifiers.
//!
//! The crate searches for minimal per-layer bit widths such that the
//! quantized network provably agrees with the reference network on the
//! Top-1 class over given input regions. The pieces:
//!
//! - [`model`] — networks, datasets, inference, and a small deterministic
//!   trainer for building desk-scale reference models.
//! - [`quantizer`] — symmetric uniform quantization with a shared
//!   weight/bias scale per layer, plus a greedy path-following baseline.
//! - [`verifier`] — a complete branch-and-bound equivalence checker over
//!   ℓ∞ balls, backed by interval bound propagation.
//! - [`search`] — genetic minimization of the total bit width subject to
//!   agreement on the current counter-example set.
//! - [`cegis`] — the optimize → verify → refine loop tying it together.
//!
//! Core math is generic over the scalar type (see [`scalar::Scalar`]);
//! the aliases below fix `f64`, which is what the CLI and all file
//! formats use.

pub mod cegis;
pub mod error;
pub mod model;
pub mod quantizer;
pub mod report;
pub mod scalar;
pub mod search;
pub mod verifier;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision network, the default scalar for files and the CLI.
pub type Network = model::Network<f64>;
pub type Layer = model::Layer<f64>;
pub type Dataset = model::Dataset<f64>;
pub type QuantizedNetwork = quantizer::QuantizedNetwork<f64>;
pub type QuantizedLayer = quantizer::QuantizedLayer<f64>;
pub type EquivalenceProperty = verifier::EquivalenceProperty<f64>;
pub type Verdict = verifier::Verdict<f64>;
pub type CounterExample = verifier::CounterExample<f64>;
pub type CounterExampleSet = search::CounterExampleSet<f64>;
pub type CegisResult = cegis::CegisResult<f64>;
