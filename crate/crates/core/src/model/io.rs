//! Model file schema.
//!
//! ```json
//! {
//!   "input_dim": 4,
//!   "layers": [
//!     {"weights": [[...], ...], "bias": [...], "activation": "relu"}
//!   ]
//! }
//! ```
//!
//! Weights are row-major, out×in. Quantized model files extend this
//! schema with grid fields (see [`crate::quantizer`]); the loader here
//! ignores those and reads the float realization, so a quantized file is
//! usable anywhere a plain model is.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Activation, Layer, Network};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct LayerRepr {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct NetworkRepr {
    pub input_dim: usize,
    pub layers: Vec<LayerRepr>,
}

impl NetworkRepr {
    pub(crate) fn into_network<T: Scalar>(self) -> Result<Network<T>> {
        let layers = self
            .layers
            .into_iter()
            .map(|l| {
                Layer::new(
                    l.weights
                        .into_iter()
                        .map(|row| row.into_iter().map(T::from_f64_lossy).collect())
                        .collect(),
                    l.bias.into_iter().map(T::from_f64_lossy).collect(),
                    l.activation,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Network::new(self.input_dim, layers)
    }

    pub(crate) fn from_network<T: Scalar>(net: &Network<T>) -> Self {
        Self {
            input_dim: net.input_dim(),
            layers: net
                .layers()
                .iter()
                .map(|l| LayerRepr {
                    weights: l
                        .weights()
                        .iter()
                        .map(|row| row.iter().map(|w| w.to_f64_lossy()).collect())
                        .collect(),
                    bias: l.bias().iter().map(|b| b.to_f64_lossy()).collect(),
                    activation: l.activation(),
                })
                .collect(),
        }
    }
}

/// Load and shape-validate a network from a model JSON file.
pub fn load_network<T: Scalar>(path: impl AsRef<Path>) -> Result<Network<T>> {
    let text = fs::read_to_string(path.as_ref())?;
    let repr: NetworkRepr = serde_json::from_str(&text)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.as_ref().display())))?;
    repr.into_network()
}

/// Write a network to the model JSON schema.
pub fn save_network<T: Scalar>(net: &Network<T>, path: impl AsRef<Path>) -> Result<()> {
    let repr = NetworkRepr::from_network(net);
    fs::write(path, serde_json::to_string_pretty(&repr)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_a_two_layer_model() {
        let json = r#"{
            "input_dim": 4,
            "layers": [
                {"weights": [[0.1,0.2,0.3,0.4],[0.5,0.6,0.7,0.8],[0.9,1.0,1.1,1.2]],
                 "bias": [0.0,0.1,0.2], "activation": "relu"},
                {"weights": [[1,0,0],[0,1,0],[0,0,1]], "bias": [0,0,0], "activation": "identity"}
            ]
        }"#;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        std::fs::write(&path, json).unwrap();
        let net: Network<f64> = load_network(&path).unwrap();
        assert_eq!(net.num_layers(), 2);
        assert_eq!(net.input_dim(), 4);
        assert_eq!(net.output_dim(), 3);

        let back = dir.path().join("back.json");
        save_network(&net, &back).unwrap();
        let again: Network<f64> = load_network(&back).unwrap();
        assert_eq!(net, again);
    }

    #[test]
    fn shape_inconsistency_names_the_layer() {
        let json = r#"{
            "input_dim": 4,
            "layers": [
                {"weights": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],
                 "bias": [0,0,0,0,0], "activation": "relu"},
                {"weights": [[0,0,0,0]], "bias": [0], "activation": "identity"}
            ]
        }"#;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        std::fs::write(&path, json).unwrap();
        let err = load_network::<f64>(&path).unwrap_err();
        assert!(matches!(err, Error::LayerShape { layer: 1, expected: 5, got: 4 }));
    }

    #[test]
    fn empty_layer_list_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        std::fs::write(&path, r#"{"input_dim": 2, "layers": []}"#).unwrap();
        assert!(load_network::<f64>(&path).is_err());
    }
}
