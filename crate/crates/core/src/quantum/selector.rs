use serde::{Deserialize, Serialize};

use super::StateVector;
use crate::error::{Error, Result};

/// Measurement operator viewed as a set of computational basis indices.
///
/// Indices are kept sorted; this is also the order in which ridge terms are
/// reported and summed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct MeasurementSelector {
    indices: Vec<usize>,
}

// The register dimension is unknown at parse time; callers run `check_dim`.
impl TryFrom<Vec<usize>> for MeasurementSelector {
    type Error = Error;

    fn try_from(indices: Vec<usize>) -> Result<Self> {
        Self::new(indices, usize::MAX)
    }
}

impl From<MeasurementSelector> for Vec<usize> {
    fn from(s: MeasurementSelector) -> Self {
        s.indices
    }
}

impl MeasurementSelector {
    /// Validates `indices` against a register dimension `dim`.
    pub fn new(mut indices: Vec<usize>, dim: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSelector("selector is empty".into()));
        }
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSelector(format!("duplicate index {}", w[0])));
        }
        let max = *indices.last().unwrap();
        if max >= dim {
            return Err(Error::InvalidSelector(format!(
                "index {max} out of range for dimension {dim}"
            )));
        }
        Ok(Self { indices })
    }

    /// Every basis index of a `dim`-dimensional register.
    pub fn full(dim: usize) -> Result<Self> {
        Self::new((0..dim).collect(), dim)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Errors if any index falls outside a `dim`-dimensional register.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.indices.last() {
            Some(&max) if max >= dim => Err(Error::InvalidSelector(format!(
                "index {max} out of range for dimension {dim}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Basis states with qubit 0 in `|0>`: the first half of the register.
pub fn first_qubit_zero_selector(n_qubits: usize) -> Result<MeasurementSelector> {
    if n_qubits < 1 {
        return Err(Error::InvalidSelector("n_qubits must be at least 1".into()));
    }
    let dim = 1usize << n_qubits;
    MeasurementSelector::new((0..dim / 2).collect(), dim)
}

/// `sum_{i in selector} |psi_i|^2`.
pub fn selector_expectation(state: &StateVector, selector: &MeasurementSelector) -> Result<f64> {
    selector.check_dim(state.dim())?;
    let amps = state.amplitudes();
    Ok(selector.indices().iter().map(|&i| amps[i].norm_sqr()).sum())
}
