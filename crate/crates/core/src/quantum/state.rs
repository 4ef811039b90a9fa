use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{log2_exact, norm_sqr};
use crate::error::{Error, Result};

/// Unit-norm amplitude vector of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    n_qubits: usize,
}

/// Validates and normalizes an amplitude vector.
pub fn build_state(amplitudes: Vec<Complex64>) -> Result<StateVector> {
    StateVector::new(amplitudes)
}

impl StateVector {
    /// Any nonzero vector of power-of-two length is accepted and scaled to
    /// unit norm.
    pub fn new(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits =
            log2_exact(amplitudes.len()).ok_or(Error::NotPowerOfTwo(amplitudes.len()))?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Unnormalizable);
        }
        if norm != 1.0 {
            amplitudes.iter_mut().for_each(|a| *a /= norm);
        }
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    /// Haar-like random state from i.i.d. complex Gaussians.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let dim = 1usize << n_qubits;
        loop {
            let amps: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(s) = Self::new(amps) {
                return s;
            }
        }
    }

    /// Wraps amplitudes already known to be unit norm (output of a unitary).
    pub(crate) fn from_unitary_output(amplitudes: Vec<Complex64>, n_qubits: usize) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            amplitudes,
            n_qubits,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }
}
