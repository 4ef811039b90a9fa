pub mod explain;
pub mod locality;
pub mod train;
pub mod verify;

use anyhow::{bail, Context, Result};
use qridge::model::CircuitModel;
use qridge::quantum::{first_qubit_zero_selector, ParamCircuit};
use qridge::{Model, ModelKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parses a model file. For circuits a bare circuit is accepted too, measured
/// with the first-qubit-zero selector. Its parameters are drawn uniformly from
/// `[-pi, pi)` with `init_seed`; without a seed it must have no parameters.
pub fn parse_model(kind: ModelKind, text: &str, init_seed: Option<u64>) -> Result<Model> {
    if kind == ModelKind::Circuit {
        let value: serde_json::Value = serde_json::from_str(text).context("invalid JSON")?;
        if value.get("circuit").is_none() {
            let circuit: ParamCircuit = serde_json::from_value(value).context("invalid circuit")?;
            let theta = match init_seed {
                Some(seed) => {
                    let mut r = rng(seed);
                    let pi = std::f64::consts::PI;
                    (0..circuit.n_params())
                        .map(|_| r.random_range(-pi..pi))
                        .collect()
                }
                None if circuit.n_params() == 0 => Vec::new(),
                None => bail!(
                    "bare circuit with {} parameters needs theta",
                    circuit.n_params()
                ),
            };
            let selector = first_qubit_zero_selector(circuit.n_qubits())?;
            return Ok(Model::Circuit(CircuitModel::new(circuit, theta, selector)?));
        }
    }
    Ok(Model::from_json(kind, text)?)
}
