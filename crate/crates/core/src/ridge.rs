//! Ridge-function view of a measured circuit.
//!
//! For a selector `O` and unitary `W`, the measured output on `|x>` is
//! `sum_{i in O} |<w_i|x>|^2`, where `<w_i|` is row `i` of `W`. Each term is
//! a univariate function of the projection `<w_i|x>`, i.e. a ridge function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{
    circuit_unitary, norm_sqr, row_dot, selector_expectation, MeasurementSelector, ParamCircuit,
    StateVector, UnitaryMatrix, UNITARY_TOL,
};

/// One selected row of `W` together with the basis index it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeTerm {
    pub direction: Vec<Complex64>,
    pub source_index: usize,
}

impl RidgeTerm {
    /// The ridge value `|<w|x>|^2`.
    #[inline]
    pub fn eval(&self, x: &[Complex64]) -> f64 {
        row_dot(&self.direction, x).norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RidgeDecomposition {
    terms: Vec<RidgeTerm>,
    dimension: usize,
    selector: MeasurementSelector,
}

impl RidgeDecomposition {
    pub fn terms(&self) -> &[RidgeTerm] {
        &self.terms
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn selector(&self) -> &MeasurementSelector {
        &self.selector
    }

    /// Directions as owned rows, in selector order.
    pub fn directions(&self) -> Vec<Vec<Complex64>> {
        self.terms.iter().map(|t| t.direction.clone()).collect()
    }

    /// `max |<w_i|w_j> - delta_ij|` over all term pairs.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.terms.iter().enumerate() {
            for (j, b) in self.terms.iter().enumerate().skip(i) {
                let mut g: Complex64 = crate::quantum::inner(&a.direction, &b.direction);
                if i == j {
                    g -= 1.0;
                }
                worst = worst.max(g.norm());
            }
        }
        worst
    }

    fn check_input(&self, x: &StateVector) -> Result<()> {
        if x.dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.dim(),
            });
        }
        Ok(())
    }
}

/// Reads the selected rows of `w` as ridge directions.
pub fn extract_rows(
    w: &UnitaryMatrix,
    selector: &MeasurementSelector,
) -> Result<RidgeDecomposition> {
    let defect = w.unitarity_defect();
    if !(defect < UNITARY_TOL) {
        return Err(Error::NotUnitary(defect));
    }
    selector.check_dim(w.dim())?;
    let terms = selector
        .indices()
        .iter()
        .map(|&i| RidgeTerm {
            direction: w.row(i).to_vec(),
            source_index: i,
        })
        .collect::<Vec<_>>();
    debug_assert!(terms
        .iter()
        .all(|t| (norm_sqr(&t.direction).sqrt() - 1.0).abs() < 1e-10));
    Ok(RidgeDecomposition {
        terms,
        dimension: w.dim(),
        selector: selector.clone(),
    })
}

/// Per-term values `|<w_i|x>|^2` in selector order.
pub fn term_contributions(decomp: &RidgeDecomposition, x: &StateVector) -> Result<Vec<f64>> {
    decomp.check_input(x)?;
    Ok(decomp
        .terms
        .iter()
        .map(|t| t.eval(x.amplitudes()))
        .collect())
}

/// `sum_i |<w_i|x>|^2`, summed left to right in selector order so that it
/// matches the sum of [`term_contributions`] bit for bit.
pub fn ridge_eval(decomp: &RidgeDecomposition, x: &StateVector) -> Result<f64> {
    Ok(term_contributions(decomp, x)?
        .iter()
        .fold(0.0, |acc, v| acc + v))
}

/// Direct simulation versus ridge evaluation for one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub direct: f64,
    pub ridge: f64,
    pub abs_diff: f64,
    pub pass: bool,
    pub n_qubits: usize,
    pub selector: Vec<usize>,
}

/// Evaluates the measured circuit twice: by running the statevector and
/// summing the selected probabilities, and through the extracted rows of the
/// dense unitary. Passes when the two agree to better than `tol`.
pub fn verify_equivalence(
    circuit: &ParamCircuit,
    theta: &[f64],
    selector: &MeasurementSelector,
    x: &StateVector,
    tol: f64,
) -> Result<EquivalenceReport> {
    let direct = selector_expectation(&circuit.run(theta, x)?, selector)?;
    let decomp = extract_rows(&circuit_unitary(circuit, theta)?, selector)?;
    let ridge = ridge_eval(&decomp, x)?;
    let abs_diff = (direct - ridge).abs();
    Ok(EquivalenceReport {
        direct,
        ridge,
        abs_diff,
        pass: abs_diff < tol,
        n_qubits: circuit.n_qubits(),
        selector: selector.indices().to_vec(),
    })
}
