//! Per-term explanation of a single prediction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelKind, Trainable};

/// Tolerance for `offset + sum(contributions)` against the recorded output.
pub const CONTRIBUTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainReport {
    pub kind: ModelKind,
    pub input_id: String,
    pub input: Vec<f64>,
    pub output: f64,
    /// Constant added to the terms (`mu` for xnn, 0 otherwise).
    pub offset: f64,
    pub contributions: Vec<f64>,
    /// `sensitivity[i][j] = d(term i) / d(param j)` by central differences.
    pub sensitivity: Vec<Vec<f64>>,
    /// Owning block of each parameter, for block models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_blocks: Option<Vec<usize>>,
    pub n_terms: usize,
    pub n_params: usize,
    pub input_dim: usize,
    pub fd_step: f64,
}

/// Invariant violations found in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub contribution_gap: f64,
    pub off_block_nonzero: Vec<(usize, usize)>,
}

impl InvariantCheck {
    pub fn ok(&self) -> bool {
        self.contribution_gap <= CONTRIBUTION_TOL && self.off_block_nonzero.is_empty()
    }
}

impl ExplainReport {
    /// Checks the contribution sum and, for block models, that every
    /// sensitivity outside a term's own block is exactly zero.
    pub fn check(&self) -> InvariantCheck {
        let sum = self.contributions.iter().fold(0.0, |a, v| a + v);
        let contribution_gap = (self.offset + sum - self.output).abs();
        let mut off_block_nonzero = Vec::new();
        if let Some(owners) = &self.param_blocks {
            for (i, row) in self.sensitivity.iter().enumerate() {
                for (j, &s) in row.iter().enumerate() {
                    if owners[j] != i && s != 0.0 {
                        off_block_nonzero.push((i, j));
                    }
                }
            }
        }
        InvariantCheck {
            contribution_gap,
            off_block_nonzero,
        }
    }
}

/// Builds the report for input `x`. Invariants are not enforced here; call
/// [`ExplainReport::check`] before publishing.
pub fn explain<M: Trainable>(
    model: &M,
    x: &[f64],
    input_id: &str,
    fd_step: f64,
) -> Result<ExplainReport> {
    if !(fd_step > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "fd_step must be positive, got {fd_step}"
        )));
    }
    let output = model.predict(x)?;
    let contributions = model.terms(x)?;
    let n_params = model.params().len();
    let mut sensitivity = vec![vec![0.0; n_params]; contributions.len()];
    for j in 0..n_params {
        let plus = model.perturb_param(j, fd_step)?.terms(x)?;
        let minus = model.perturb_param(j, -fd_step)?.terms(x)?;
        for (row, (p, m)) in sensitivity.iter_mut().zip(plus.iter().zip(&minus)) {
            row[j] = (p - m) / (2.0 * fd_step);
        }
    }
    Ok(ExplainReport {
        kind: model.kind(),
        input_id: input_id.to_string(),
        input: x.to_vec(),
        output,
        offset: model.offset(),
        n_terms: contributions.len(),
        contributions,
        sensitivity,
        param_blocks: model.param_blocks(),
        n_params,
        input_dim: x.len(),
        fd_step,
    })
}
