use crate::error::{Error, Result};
use crate::quantum::{selector_expectation, MeasurementSelector, ParamCircuit, StateVector};

/// Shift used by the two-point rule for generators with eigenvalues `+-1/2`.
pub const SHIFT: f64 = std::f64::consts::FRAC_PI_2;

/// Exact gradient of `selector_expectation(W(theta)|x>)` by the
/// parameter-shift rule, `dE/dtheta_j = (E(theta_j + pi/2) - E(theta_j - pi/2)) / 2`.
///
/// Every parameter slot must feed exactly one rotation; shared slots are
/// rejected and should be differentiated with [`finite_diff_gradient`].
pub fn parameter_shift_gradient(
    circuit: &ParamCircuit,
    theta: &[f64],
    selector: &MeasurementSelector,
    x: &StateVector,
) -> Result<Vec<f64>> {
    if let Some((slot, &count)) = circuit
        .slot_usage()
        .iter()
        .enumerate()
        .find(|(_, &c)| c != 1)
    {
        return Err(Error::SharedParameterSlot(slot, count));
    }
    circuit.check_theta(theta)?;
    selector.check_dim(circuit.dim())?;
    let expectation =
        |t: &[f64]| -> Result<f64> { selector_expectation(&circuit.run(t, x)?, selector) };
    let mut shifted = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for j in 0..theta.len() {
        shifted[j] = theta[j] + SHIFT;
        let plus = expectation(&shifted)?;
        shifted[j] = theta[j] - SHIFT;
        let minus = expectation(&shifted)?;
        shifted[j] = theta[j];
        grad.push((plus - minus) / 2.0);
    }
    Ok(grad)
}

/// Central differences `(f(theta + h e_j) - f(theta - h e_j)) / 2h`.
pub fn finite_diff_gradient<F>(f: F, theta: &[f64], step: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    assert!(step > 0.0, "finite-difference step must be positive");
    let mut probe = theta.to_vec();
    (0..theta.len())
        .map(|j| {
            probe[j] = theta[j] + step;
            let plus = f(&probe);
            probe[j] = theta[j] - step;
            let minus = f(&probe);
            probe[j] = theta[j];
            (plus - minus) / (2.0 * step)
        })
        .collect()
}
