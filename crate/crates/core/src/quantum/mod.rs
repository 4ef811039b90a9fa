//! Dense statevector simulation of parameterized circuits.
//!
//! Basis indices are big-endian: qubit 0 is the most significant bit, so the
//! "first qubit in |0>" subspace is exactly the first half of the amplitude
//! vector.

mod circuit;
mod gate;
mod selector;
mod state;
mod unitary;

pub use circuit::{hardware_efficient_ansatz, random_circuit, run_circuit, ParamCircuit};
pub use gate::{apply_gate, GateKind, GateOp};
pub use selector::{first_qubit_zero_selector, selector_expectation, MeasurementSelector};
pub use state::{build_state, StateVector};
pub use unitary::{circuit_unitary, UnitaryMatrix};

use num_complex::Complex64;

/// Largest register for which a dense `2^n x 2^n` unitary is built.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Tolerance on `max |V^dag V - I|` for a matrix to count as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Bilinear product `sum_j a_j b_j` (no conjugation).
///
/// A row `<w|` of a unitary is stored with its matrix entries, so
/// `<w|x> = sum_j w_j x_j`.
#[inline]
pub fn row_dot(row: &[Complex64], x: &[Complex64]) -> Complex64 {
    row.iter()
        .zip(x)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
}

/// Hermitian inner product `sum_j conj(a_j) b_j`.
#[inline]
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

#[inline]
pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Returns `n` such that `2^n == len`.
pub fn log2_exact(len: usize) -> Option<usize> {
    if len == 0 || !len.is_power_of_two() {
        None
    } else {
        Some(len.trailing_zeros() as usize)
    }
}
