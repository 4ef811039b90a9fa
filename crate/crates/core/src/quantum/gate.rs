use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::StateVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    H,
    CNOT,
    CZ,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::CNOT | GateKind::CZ => 2,
            _ => 1,
        }
    }
}

/// One gate of a circuit. For `CNOT`, `targets = [control, target]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateOp {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_index: Option<usize>,
}

impl GateOp {
    pub fn rotation(kind: GateKind, qubit: usize, param_index: usize) -> Self {
        assert!(kind.is_rotation(), "{kind:?} is not a rotation");
        Self {
            kind,
            targets: vec![qubit],
            param_index: Some(param_index),
        }
    }

    pub fn rx(qubit: usize, param_index: usize) -> Self {
        Self::rotation(GateKind::RX, qubit, param_index)
    }

    pub fn ry(qubit: usize, param_index: usize) -> Self {
        Self::rotation(GateKind::RY, qubit, param_index)
    }

    pub fn rz(qubit: usize, param_index: usize) -> Self {
        Self::rotation(GateKind::RZ, qubit, param_index)
    }

    pub fn h(qubit: usize) -> Self {
        Self {
            kind: GateKind::H,
            targets: vec![qubit],
            param_index: None,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::CNOT,
            targets: vec![control, target],
            param_index: None,
        }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self {
            kind: GateKind::CZ,
            targets: vec![a, b],
            param_index: None,
        }
    }

    /// Structural checks against a register of `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{:?} takes {} target(s), got {}",
                self.kind,
                self.kind.arity(),
                self.targets.len()
            )));
        }
        if let Some(&q) = self.targets.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::InvalidGate(format!(
                "{:?} target {q} out of range for {n_qubits} qubit(s)",
                self.kind
            )));
        }
        if self.targets.len() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::InvalidGate(format!(
                "{:?} targets must be distinct",
                self.kind
            )));
        }
        match (self.kind.is_rotation(), self.param_index) {
            (true, None) => Err(Error::InvalidGate(format!(
                "{:?} requires a param_index",
                self.kind
            ))),
            (false, Some(_)) => Err(Error::InvalidGate(format!(
                "{:?} takes no parameter",
                self.kind
            ))),
            _ => Ok(()),
        }
    }

    /// 2x2 matrix of a one-qubit gate, row-major.
    fn single_qubit_matrix(&self, theta: &[f64]) -> Result<[Complex64; 4]> {
        let angle = match self.param_index {
            Some(i) => *theta.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                len: theta.len(),
            })?,
            None => 0.0,
        };
        let (s, c) = (angle / 2.0).sin_cos();
        let z = Complex64::new(0.0, 0.0);
        let r = |x: f64| Complex64::new(x, 0.0);
        let m = match self.kind {
            GateKind::RX => [r(c), Complex64::new(0.0, -s), Complex64::new(0.0, -s), r(c)],
            GateKind::RY => [r(c), r(-s), r(s), r(c)],
            GateKind::RZ => [Complex64::new(c, -s), z, z, Complex64::new(c, s)],
            GateKind::H => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                [r(h), r(h), r(h), r(-h)]
            }
            GateKind::CNOT | GateKind::CZ => unreachable!("two-qubit gate"),
        };
        Ok(m)
    }
}

#[inline]
fn bit(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

/// Applies `gate` in place to an amplitude buffer of `2^n_qubits` entries.
pub(crate) fn apply_in_place(
    amps: &mut [Complex64],
    n_qubits: usize,
    gate: &GateOp,
    theta: &[f64],
) -> Result<()> {
    gate.validate(n_qubits)?;
    match gate.kind {
        GateKind::CNOT => {
            let (cm, tm) = (
                bit(n_qubits, gate.targets[0]),
                bit(n_qubits, gate.targets[1]),
            );
            for i in 0..amps.len() {
                if i & cm != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        GateKind::CZ => {
            let mask = bit(n_qubits, gate.targets[0]) | bit(n_qubits, gate.targets[1]);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask == mask {
                    *a = -*a;
                }
            }
        }
        _ => {
            let [m00, m01, m10, m11] = gate.single_qubit_matrix(theta)?;
            let mask = bit(n_qubits, gate.targets[0]);
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let j = i | mask;
                    let (a, b) = (amps[i], amps[j]);
                    amps[i] = m00 * a + m01 * b;
                    amps[j] = m10 * a + m11 * b;
                }
            }
        }
    }
    Ok(())
}

/// Applies one gate, returning the new state.
///
/// Rotations are `exp(-i phi G / 2)` for `G` in {X, Y, Z}, with `phi` read
/// from `theta[param_index]`.
pub fn apply_gate(state: &StateVector, gate: &GateOp, theta: &[f64]) -> Result<StateVector> {
    let n = state.n_qubits();
    let mut amps = state.amplitudes().to_vec();
    apply_in_place(&mut amps, n, gate, theta)?;
    Ok(StateVector::from_unitary_output(amps, n))
}
