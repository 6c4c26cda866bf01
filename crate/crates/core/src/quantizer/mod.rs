//! Symmetric uniform quantization with a shared per-layer scale.
//!
//! A tensor is clipped to the symmetric range `[-c, c]` with
//! `c = max(|min A|, |max A|)`, mapped to the integer grid by
//! `Q = clip(round(A / s), -2^(n-1), 2^(n-1) - 1)` with grid step
//! `s = 2c / (2^n - 1)`, and realized back in floating point as `s·Q`.
//! Rounding is half away from zero. Weight and bias of a layer share one
//! scale, derived from their combined clip bound.

mod gpfq;

pub use gpfq::gpfq_quantize;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{io::NetworkRepr, Layer, Network};
use crate::scalar::{cast, Scalar};

/// Smallest legal bit width; below this the grid formulas degenerate.
pub const MIN_BITS: u32 = 2;
/// Widest supported bit width, the significand width of an IEEE 754
/// double. Wider grids would overflow the exactly-representable integer
/// range of the realization scalar.
pub const MAX_BITS: u32 = 52;

/// Per-layer bit widths together with the search bounds they must obey.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitAllocation {
    bits: Vec<u32>,
    n_min: u32,
    n_max: u32,
}

impl BitAllocation {
    pub fn new(bits: Vec<u32>, n_min: u32, n_max: u32) -> Result<Self> {
        if n_min < MIN_BITS {
            return Err(Error::InvalidArgument(format!(
                "minimum bit width {n_min} is below {MIN_BITS}"
            )));
        }
        if n_max > MAX_BITS {
            return Err(Error::InvalidArgument(format!(
                "maximum bit width {n_max} exceeds {MAX_BITS}"
            )));
        }
        if n_min > n_max {
            return Err(Error::InvalidArgument(format!(
                "bit bounds inverted: {n_min} > {n_max}"
            )));
        }
        if bits.is_empty() {
            return Err(Error::InvalidArgument("empty bit allocation".into()));
        }
        if let Some(&b) = bits.iter().find(|&&b| b < n_min || b > n_max) {
            return Err(Error::InvalidArgument(format!(
                "bit width {b} outside [{n_min}, {n_max}]"
            )));
        }
        Ok(Self { bits, n_min, n_max })
    }

    /// All layers at the same width.
    pub fn uniform(layers: usize, n: u32, n_min: u32, n_max: u32) -> Result<Self> {
        Self::new(vec![n; layers], n_min, n_max)
    }

    /// The guaranteed-representable anchor: every layer at `n_max`.
    pub fn all_max(layers: usize, n_min: u32, n_max: u32) -> Result<Self> {
        Self::uniform(layers, n_max, n_min, n_max)
    }

    pub fn bits(&self) -> &[u32] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn n_min(&self) -> u32 {
        self.n_min
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// The objective being minimized: total bits across layers.
    pub fn total_bits(&self) -> u64 {
        self.bits.iter().map(|&b| b as u64).sum()
    }

    pub fn is_all_max(&self) -> bool {
        self.bits.iter().all(|&b| b == self.n_max)
    }
}

/// Integer grid for one layer plus the shared scale that realizes it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedLayer<T> {
    pub q_weights: Vec<Vec<i64>>,
    pub q_bias: Vec<i64>,
    pub scale: T,
    pub bits: u32,
}

/// A quantized network: the integer grids and the de-quantized float
/// realization (`scale × grid`) actually used for inference and
/// verification.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedNetwork<T> {
    layers: Vec<QuantizedLayer<T>>,
    realization: Network<T>,
}

impl<T: Scalar> QuantizedNetwork<T> {
    pub fn layers(&self) -> &[QuantizedLayer<T>] {
        &self.layers
    }

    pub fn realization(&self) -> &Network<T> {
        &self.realization
    }

    pub fn allocation(&self, n_min: u32, n_max: u32) -> Result<BitAllocation> {
        BitAllocation::new(self.layers.iter().map(|l| l.bits).collect(), n_min, n_max)
    }
}

/// Symmetric clip bound `c = max(|min A|, |max A|)`; 0 for an empty tensor.
pub fn clip_bound<'a, T: Scalar + 'a>(values: impl IntoIterator<Item = &'a T>) -> T {
    values
        .into_iter()
        .fold(T::zero(), |acc, v| acc.max(v.abs()))
}

fn grid_step<T: Scalar>(c: T, n: u32) -> Result<T> {
    if !(MIN_BITS..=MAX_BITS).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "bit width {n} outside [{MIN_BITS}, {MAX_BITS}]"
        )));
    }
    if c == T::zero() {
        // zero tensors quantize to zeros; a unit scale keeps the math defined
        return Ok(T::one());
    }
    let levels = cast::<T>(((1u64 << n) - 1) as f64);
    Ok((c + c) / levels)
}

/// Grid step `s = 2c / (2^n - 1)` over the tensor's symmetric clip range.
pub fn scale_factor<'a, T: Scalar + 'a>(
    values: impl IntoIterator<Item = &'a T>,
    n: u32,
) -> Result<T> {
    grid_step(clip_bound(values), n)
}

fn integer_range(n: u32) -> (i64, i64) {
    let half = 1i64 << (n - 1);
    (-half, half - 1)
}

/// Round half away from zero, then clamp into the signed n-bit range.
fn round_into_range<T: Scalar>(x: T, lo: i64, hi: i64) -> i64 {
    let r = x.round();
    match r.to_i64() {
        Some(v) => v.clamp(lo, hi),
        // non-finite or astronomically large: saturate by sign
        None => {
            if r > T::zero() {
                hi
            } else {
                lo
            }
        }
    }
}

/// Quantize a tensor onto its own n-bit grid; returns the integers and
/// the grid step.
pub fn quantize_tensor<T: Scalar>(values: &[T], n: u32) -> Result<(Vec<i64>, T)> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("tensor to quantize"));
    }
    let s = scale_factor(values, n)?;
    let (lo, hi) = integer_range(n);
    let q = values
        .iter()
        .map(|&v| round_into_range(v / s, lo, hi))
        .collect();
    Ok((q, s))
}

/// Realize integers back to floats: one multiplication per entry.
pub fn dequantize<T: Scalar>(q: &[i64], scale: T) -> Vec<T> {
    q.iter()
        .map(|&v| scale * cast::<T>(v as f64))
        .collect()
}

/// Quantize every layer at its allocated width. Weight and bias share
/// the scale derived from their combined clip bound, so a zero bias
/// never distorts the weight grid. Activations are copied unchanged.
pub fn quantize_network<T: Scalar>(
    net: &Network<T>,
    alloc: &BitAllocation,
) -> Result<QuantizedNetwork<T>> {
    if alloc.len() != net.num_layers() {
        return Err(Error::Dimension {
            expected: net.num_layers(),
            got: alloc.len(),
        });
    }
    let mut q_layers = Vec::with_capacity(net.num_layers());
    let mut real_layers = Vec::with_capacity(net.num_layers());
    for (layer, &n) in net.layers().iter().zip(alloc.bits()) {
        let c_weights = clip_bound(layer.weights().iter().flatten());
        let c_bias = clip_bound(layer.bias());
        let s = grid_step(c_weights.max(c_bias), n)?;
        let (lo, hi) = integer_range(n);

        let q_weights: Vec<Vec<i64>> = layer
            .weights()
            .iter()
            .map(|row| row.iter().map(|&w| round_into_range(w / s, lo, hi)).collect())
            .collect();
        let q_bias: Vec<i64> = layer
            .bias()
            .iter()
            .map(|&b| round_into_range(b / s, lo, hi))
            .collect();

        let real_w = q_weights.iter().map(|row| dequantize(row, s)).collect();
        let real_b = dequantize(&q_bias, s);
        real_layers.push(Layer::new(real_w, real_b, layer.activation())?);
        q_layers.push(QuantizedLayer {
            q_weights,
            q_bias,
            scale: s,
            bits: n,
        });
    }
    Ok(QuantizedNetwork {
        layers: q_layers,
        realization: Network::new(net.input_dim(), real_layers)?,
    })
}

// --- quantized model file schema -------------------------------------
//
// The plain model schema plus per-layer integer grids and the top-level
// `bits` and `scales` arrays. `weights`/`bias` always hold the exact
// realization, so such a file also loads as an ordinary model.

#[derive(Debug, Serialize, Deserialize)]
struct QuantLayerRepr {
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
    activation: crate::model::Activation,
    q_weights: Vec<Vec<i64>>,
    q_bias: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct QuantNetworkRepr {
    input_dim: usize,
    layers: Vec<QuantLayerRepr>,
    bits: Vec<u32>,
    scales: Vec<f64>,
}

pub fn save_quantized<T: Scalar>(q: &QuantizedNetwork<T>, path: impl AsRef<Path>) -> Result<()> {
    let base = NetworkRepr::from_network(q.realization());
    let repr = QuantNetworkRepr {
        input_dim: base.input_dim,
        layers: base
            .layers
            .into_iter()
            .zip(&q.layers)
            .map(|(l, ql)| QuantLayerRepr {
                weights: l.weights,
                bias: l.bias,
                activation: l.activation,
                q_weights: ql.q_weights.clone(),
                q_bias: ql.q_bias.clone(),
            })
            .collect(),
        bits: q.layers.iter().map(|l| l.bits).collect(),
        scales: q.layers.iter().map(|l| l.scale.to_f64_lossy()).collect(),
    };
    fs::write(path, serde_json::to_string_pretty(&repr)?)?;
    Ok(())
}

/// Load a quantized model file, checking that the stored realization is
/// exactly `scale × grid`.
pub fn load_quantized<T: Scalar>(path: impl AsRef<Path>) -> Result<QuantizedNetwork<T>> {
    let text = fs::read_to_string(path.as_ref())?;
    let repr: QuantNetworkRepr = serde_json::from_str(&text)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.as_ref().display())))?;
    if repr.bits.len() != repr.layers.len() || repr.scales.len() != repr.layers.len() {
        return Err(Error::Schema(
            "bits/scales length does not match layer count".into(),
        ));
    }
    let mut q_layers = Vec::with_capacity(repr.layers.len());
    let mut real_layers = Vec::with_capacity(repr.layers.len());
    for (i, (layer, (&bits, &scale))) in repr
        .layers
        .into_iter()
        .zip(repr.bits.iter().zip(&repr.scales))
        .enumerate()
    {
        let s = T::from_f64_lossy(scale);
        let (lo, hi) = integer_range(bits);
        let in_range = |q: &i64| (lo..=hi).contains(q);
        if !layer.q_weights.iter().flatten().all(in_range) || !layer.q_bias.iter().all(in_range) {
            return Err(Error::Schema(format!(
                "layer {i}: integer grid entry outside the {bits}-bit range"
            )));
        }
        let expect_w: Vec<Vec<T>> = layer.q_weights.iter().map(|r| dequantize(r, s)).collect();
        let expect_b: Vec<T> = dequantize(&layer.q_bias, s);
        let stored_w: Vec<Vec<T>> = layer
            .weights
            .iter()
            .map(|r| r.iter().map(|&w| T::from_f64_lossy(w)).collect())
            .collect();
        let stored_b: Vec<T> = layer.bias.iter().map(|&b| T::from_f64_lossy(b)).collect();
        if stored_w != expect_w || stored_b != expect_b {
            return Err(Error::Schema(format!(
                "layer {i}: stored realization is not scale × grid"
            )));
        }
        real_layers.push(Layer::new(stored_w, stored_b, layer.activation)?);
        q_layers.push(QuantizedLayer {
            q_weights: layer.q_weights,
            q_bias: layer.q_bias,
            scale: s,
            bits,
        });
    }
    Ok(QuantizedNetwork {
        layers: q_layers,
        realization: Network::new(repr.input_dim, real_layers)?,
    })
}
