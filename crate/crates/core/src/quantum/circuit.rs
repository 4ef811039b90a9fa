use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gate::apply_in_place;
use super::{GateKind, GateOp, StateVector};
use crate::error::{Error, Result};

/// Gate list plus parameter slot count, defining `W(theta)`.
///
/// Deserialization validates every invariant, so a `ParamCircuit` read from
/// JSON is always well formed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit", deny_unknown_fields)]
pub struct ParamCircuit {
    n_qubits: usize,
    n_params: usize,
    gates: Vec<GateOp>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    n_qubits: usize,
    n_params: usize,
    gates: Vec<GateOp>,
}

impl TryFrom<RawCircuit> for ParamCircuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Self> {
        ParamCircuit::new(raw.n_qubits, raw.n_params, raw.gates)
    }
}

impl ParamCircuit {
    pub fn new(n_qubits: usize, n_params: usize, gates: Vec<GateOp>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidCircuit("n_qubits must be positive".into()));
        }
        let mut used = vec![false; n_params];
        for (i, g) in gates.iter().enumerate() {
            g.validate(n_qubits)
                .map_err(|e| Error::InvalidCircuit(format!("gate {i}: {e}")))?;
            if let Some(p) = g.param_index {
                *used.get_mut(p).ok_or_else(|| {
                    Error::InvalidCircuit(format!(
                        "gate {i}: param_index {p} >= n_params {n_params}"
                    ))
                })? = true;
            }
        }
        if let Some(p) = used.iter().position(|u| !u) {
            return Err(Error::InvalidCircuit(format!(
                "parameter slot {p} is not used by any gate"
            )));
        }
        Ok(Self {
            n_qubits,
            n_params,
            gates,
        })
    }

    /// Circuit with no gates: `W = I`.
    pub fn empty(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 0, Vec::new())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    /// Number of gates reading each parameter slot.
    pub fn slot_usage(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_params];
        for p in self.gates.iter().filter_map(|g| g.param_index) {
            counts[p] += 1;
        }
        counts
    }

    pub(crate) fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n_params {
            return Err(Error::ParamCountMismatch {
                expected: self.n_params,
                actual: theta.len(),
            });
        }
        Ok(())
    }

    /// Runs the gates in order on a raw amplitude buffer.
    pub(crate) fn apply_to(&self, amps: &mut [Complex64], theta: &[f64]) -> Result<()> {
        for g in &self.gates {
            apply_in_place(amps, self.n_qubits, g, theta)?;
        }
        Ok(())
    }

    /// `W(theta) |input>`.
    pub fn run(&self, theta: &[f64], input: &StateVector) -> Result<StateVector> {
        self.check_theta(theta)?;
        if input.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: input.dim(),
            });
        }
        let mut amps = input.amplitudes().to_vec();
        self.apply_to(&mut amps, theta)?;
        Ok(StateVector::from_unitary_output(amps, self.n_qubits))
    }
}

/// Free-function form of [`ParamCircuit::run`].
pub fn run_circuit(
    circuit: &ParamCircuit,
    theta: &[f64],
    input: &StateVector,
) -> Result<StateVector> {
    circuit.run(theta, input)
}

/// Layered hardware-efficient ansatz.
///
/// Each layer applies `RY` then `RZ` to every qubit, and layers are joined by
/// a CNOT ring (`q -> q+1`, closing `n-1 -> 0` when `n > 2`). There is no
/// entangler after the last layer, so a single layer is a product of
/// one-qubit rotations. Parameter slots are gate-unique, `2 * n * layers` in
/// total.
pub fn hardware_efficient_ansatz(n_qubits: usize, layers: usize) -> Result<ParamCircuit> {
    if layers == 0 {
        return Err(Error::InvalidCircuit(
            "ansatz needs at least one layer".into(),
        ));
    }
    let mut gates = Vec::new();
    let mut slot = 0;
    for layer in 0..layers {
        for q in 0..n_qubits {
            gates.push(GateOp::ry(q, slot));
            gates.push(GateOp::rz(q, slot + 1));
            slot += 2;
        }
        if layer + 1 < layers {
            gates.extend(cnot_ring(n_qubits));
        }
    }
    ParamCircuit::new(n_qubits, slot, gates)
}

fn cnot_ring(n_qubits: usize) -> Vec<GateOp> {
    let mut ring: Vec<GateOp> = (0..n_qubits.saturating_sub(1))
        .map(|q| GateOp::cnot(q, q + 1))
        .collect();
    if n_qubits > 2 {
        ring.push(GateOp::cnot(n_qubits - 1, 0));
    }
    ring
}

/// Random layered circuit over the full gate set with gate-unique slots.
///
/// Each layer draws a rotation axis per qubit, inserts a Hadamard with
/// probability 1/4, then entangles neighbouring pairs with CNOT or CZ.
pub fn random_circuit<R: Rng + ?Sized>(
    n_qubits: usize,
    layers: usize,
    rng: &mut R,
) -> Result<ParamCircuit> {
    const AXES: [GateKind; 3] = [GateKind::RX, GateKind::RY, GateKind::RZ];
    let mut gates = Vec::new();
    let mut slot = 0;
    for _ in 0..layers {
        for q in 0..n_qubits {
            if rng.random_bool(0.25) {
                gates.push(GateOp::h(q));
            }
            gates.push(GateOp::rotation(AXES[rng.random_range(0..3)], q, slot));
            slot += 1;
        }
        for q in 0..n_qubits.saturating_sub(1) {
            let (a, b) = if rng.random_bool(0.5) {
                (q, q + 1)
            } else {
                (q + 1, q)
            };
            gates.push(if rng.random_bool(0.5) {
                GateOp::cnot(a, b)
            } else {
                GateOp::cz(a, b)
            });
        }
    }
    ParamCircuit::new(n_qubits, slot, gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn empty_circuit_is_identity() {
        let c = ParamCircuit::empty(2).unwrap();
        let x = StateVector::from_real(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(c.run(&[], &x).unwrap(), x);
    }

    #[test]
    fn single_hadamard() {
        let c = ParamCircuit::new(1, 0, vec![GateOp::h(0)]).unwrap();
        let out = c.run(&[], &StateVector::basis(1, 0).unwrap()).unwrap();
        for a in out.amplitudes() {
            assert!((a.re - FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn bell_pair() {
        let c = ParamCircuit::new(2, 0, vec![GateOp::h(0), GateOp::cnot(0, 1)]).unwrap();
        let out = c.run(&[], &StateVector::basis(2, 0).unwrap()).unwrap();
        let expected = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
        for (a, e) in out.amplitudes().iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn rejects_mismatches() {
        let c = hardware_efficient_ansatz(2, 1).unwrap();
        let x = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            c.run(&[0.0; 3], &x),
            Err(Error::ParamCountMismatch { .. })
        ));
        let y = StateVector::basis(1, 0).unwrap();
        assert!(matches!(
            c.run(&[0.0; 4], &y),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn validates_slots_and_targets() {
        assert!(ParamCircuit::new(1, 2, vec![GateOp::ry(0, 0)]).is_err());
        assert!(ParamCircuit::new(1, 1, vec![GateOp::ry(0, 1)]).is_err());
        assert!(ParamCircuit::new(1, 0, vec![GateOp::cnot(0, 1)]).is_err());
        assert!(ParamCircuit::new(0, 0, vec![]).is_err());
    }

    #[test]
    fn ansatz_shape() {
        let c = hardware_efficient_ansatz(3, 2).unwrap();
        assert_eq!(c.n_params(), 12);
        assert_eq!(
            c.gates()
                .iter()
                .filter(|g| g.kind == GateKind::CNOT)
                .count(),
            3
        );
        assert!(c.slot_usage().iter().all(|&u| u == 1));
        let single = hardware_efficient_ansatz(2, 1).unwrap();
        assert!(single.gates().iter().all(|g| g.kind.is_rotation()));
    }

    #[test]
    fn circuit_json_round_trip_and_strictness() {
        let json = r#"{"n_qubits":2,"n_params":1,"gates":[{"kind":"H","targets":[0]},{"kind":"RY","targets":[1],"param_index":0},{"kind":"CNOT","targets":[0,1]}]}"#;
        let c: ParamCircuit = serde_json::from_str(json).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), json);
        let extra = r#"{"n_qubits":1,"n_params":0,"gates":[],"name":"x"}"#;
        assert!(serde_json::from_str::<ParamCircuit>(extra).is_err());
        let bad = r#"{"n_qubits":1,"n_params":0,"gates":[{"kind":"CZ","targets":[0]}]}"#;
        assert!(serde_json::from_str::<ParamCircuit>(bad).is_err());
    }
}
