use num_complex::Complex64;

use super::{log2_exact, row_dot, ParamCircuit, StateVector, MAX_DENSE_QUBITS, UNITARY_TOL};
use crate::error::{Error, Result};

/// Dense square matrix satisfying `max |V^dag V - I| < 1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    // row-major
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    /// Checks unitarity and wraps a row-major `dim x dim` buffer.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        let m = Self { dim, entries };
        let defect = m.unitarity_defect();
        if !(defect < UNITARY_TOL) {
            return Err(Error::NotUnitary(defect));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: r.len(),
            });
        }
        Self::new(dim, rows.concat())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> Option<usize> {
        log2_exact(self.dim)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `max_{ij} |(V^dag V - I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.entries[k * n + i].conj() * self.entries[k * n + j];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Matrix-vector product on a raw buffer.
    pub fn apply_slice(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok((0..self.dim).map(|i| row_dot(self.row(i), x)).collect())
    }

    pub fn apply(&self, x: &StateVector) -> Result<StateVector> {
        let out = self.apply_slice(x.amplitudes())?;
        Ok(StateVector::from_unitary_output(out, x.n_qubits()))
    }
}

/// Dense `W(theta)`; column `j` is the circuit applied to `|j>`.
pub fn circuit_unitary(circuit: &ParamCircuit, theta: &[f64]) -> Result<UnitaryMatrix> {
    if circuit.n_qubits() > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits(circuit.n_qubits()));
    }
    circuit.check_theta(theta)?;
    let dim = circuit.dim();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut column = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        column
            .iter_mut()
            .for_each(|a| *a = Complex64::new(0.0, 0.0));
        column[j] = Complex64::new(1.0, 0.0);
        circuit.apply_to(&mut column, theta)?;
        for (i, a) in column.iter().enumerate() {
            entries[i * dim + j] = *a;
        }
    }
    UnitaryMatrix::new(dim, entries)
}
