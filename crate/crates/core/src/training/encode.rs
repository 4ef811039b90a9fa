use crate::error::{Error, Result};
use crate::quantum::StateVector;

/// Amplitude-encoded input together with the norm it was divided by.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedInput {
    pub state: StateVector,
    pub original_norm: f64,
}

/// Pads `x` with zeros to `2^n_qubits` entries and normalizes.
pub fn encode_input(x: &[f64], n_qubits: usize) -> Result<EncodedInput> {
    let dim = 1usize << n_qubits;
    if x.len() > dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: x.len(),
        });
    }
    let original_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut padded = x.to_vec();
    padded.resize(dim, 0.0);
    let state = StateVector::from_real(&padded)?;
    Ok(EncodedInput {
        state,
        original_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(e: &EncodedInput) -> Vec<f64> {
        e.state.amplitudes().iter().map(|a| a.re).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(re(&encode_input(&[1.0, 0.0], 1).unwrap()), vec![1.0, 0.0]);
        let e = encode_input(&[3.0, 4.0], 1).unwrap();
        assert_eq!(re(&e), vec![0.6, 0.8]);
        assert_eq!(e.original_norm, 5.0);
        let s = 1.0 / 3f64.sqrt();
        let v = re(&encode_input(&[1.0, 1.0, 1.0], 2).unwrap());
        for (a, b) in v.iter().zip([s, s, s, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(v[3], 0.0);
    }

    #[test]
    fn errors() {
        assert_eq!(
            encode_input(&[0.0, 0.0], 1).unwrap_err(),
            Error::Unnormalizable
        );
        assert!(matches!(
            encode_input(&[1.0, 2.0, 3.0], 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
