//! Greedy path-following post-training quantization, the fixed-precision
//! accuracy baseline.
//!
//! Layers are processed in order and each neuron's weight vector is
//! quantized coordinate by coordinate onto the layer's uniform symmetric
//! grid (the same grid the main quantizer uses). A running residual
//! tracks the gap between the original and the quantized neuron
//! pre-activations over the calibration inputs, where the calibration
//! inputs seen by quantized coordinates have themselves been propagated
//! through the already-quantized prefix of the network.

use super::{clip_bound, dequantize, BitAllocation, QuantizedLayer, QuantizedNetwork};
use crate::error::{Error, Result};
use crate::model::{Dataset, Layer, Network};
use crate::scalar::{cast, Scalar};

/// Quantize every layer at a single width `n` against a calibration set.
/// Deterministic: coordinates are processed in ascending index order.
pub fn gpfq_quantize<T: Scalar>(
    net: &Network<T>,
    calibration: &Dataset<T>,
    n: u32,
) -> Result<QuantizedNetwork<T>> {
    if calibration.is_empty() {
        return Err(Error::EmptyCalibration);
    }
    if calibration.input_dim() != net.input_dim() {
        return Err(Error::Dimension {
            expected: net.input_dim(),
            got: calibration.input_dim(),
        });
    }
    let order: Vec<Vec<usize>> = net
        .layers()
        .iter()
        .map(|l| (0..l.in_dim()).collect())
        .collect();
    gpfq_with_order(net, calibration, n, &order)
}

/// Same as [`gpfq_quantize`] but with an explicit per-layer coordinate
/// processing order; used to probe order sensitivity.
pub(crate) fn gpfq_with_order<T: Scalar>(
    net: &Network<T>,
    calibration: &Dataset<T>,
    n: u32,
    order: &[Vec<usize>],
) -> Result<QuantizedNetwork<T>> {
    let alloc = BitAllocation::uniform(net.num_layers(), n, super::MIN_BITS, super::MAX_BITS)?;

    // calibration activations through the original and quantized prefixes
    let mut orig_inputs: Vec<Vec<T>> = calibration.iter().map(|(x, _)| x.to_vec()).collect();
    let mut quant_inputs: Vec<Vec<T>> = orig_inputs.clone();
    let samples = orig_inputs.len();

    let mut q_layers = Vec::with_capacity(net.num_layers());
    let mut real_layers = Vec::with_capacity(net.num_layers());

    for (layer, (coords, &bits)) in net
        .layers()
        .iter()
        .zip(order.iter().zip(alloc.bits()))
    {
        let c_weights = clip_bound(layer.weights().iter().flatten());
        let c_bias = clip_bound(layer.bias());
        let s = super::grid_step(c_weights.max(c_bias), bits)?;
        let (lo, hi) = super::integer_range(bits);

        let mut q_weights = Vec::with_capacity(layer.out_dim());
        for row in layer.weights() {
            let mut q_row = vec![0i64; row.len()];
            let mut residual = vec![T::zero(); samples];
            for &t in coords {
                let w_t = row[t];
                // unconstrained minimizer of |residual + w_t·orig[:,t] - q·s·quant[:,t]|²
                let mut numer = T::zero();
                let mut denom = T::zero();
                for m in 0..samples {
                    let xq = quant_inputs[m][t];
                    numer = numer + xq * (residual[m] + w_t * orig_inputs[m][t]);
                    denom = denom + xq * xq;
                }
                let q_t = if denom > T::zero() {
                    super::round_into_range(numer / denom / s, lo, hi)
                } else {
                    // dead direction in the calibration set: plain rounding
                    super::round_into_range(w_t / s, lo, hi)
                };
                let realized = s * cast::<T>(q_t as f64);
                for m in 0..samples {
                    residual[m] =
                        residual[m] + w_t * orig_inputs[m][t] - realized * quant_inputs[m][t];
                }
                q_row[t] = q_t;
            }
            q_weights.push(q_row);
        }
        let q_bias: Vec<i64> = layer
            .bias()
            .iter()
            .map(|&b| super::round_into_range(b / s, lo, hi))
            .collect();

        let real_w: Vec<Vec<T>> = q_weights.iter().map(|r| dequantize(r, s)).collect();
        let real_b = dequantize(&q_bias, s);
        let real_layer = Layer::new(real_w, real_b, layer.activation())?;

        for m in 0..samples {
            orig_inputs[m] = layer.apply(&orig_inputs[m]);
            quant_inputs[m] = real_layer.apply(&quant_inputs[m]);
        }
        real_layers.push(real_layer);
        q_layers.push(QuantizedLayer {
            q_weights,
            q_bias,
            scale: s,
            bits,
        });
    }

    Ok(QuantizedNetwork {
        layers: q_layers,
        realization: Network::new(net.input_dim(), real_layers)?,
    })
}
