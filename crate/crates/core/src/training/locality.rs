use serde::{Deserialize, Serialize};

use crate::block::{perturb_block, BlockRidgeModel};
use crate::error::Result;
use crate::quantum::StateVector;

/// Per-term contributions before and after perturbing one block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub block: usize,
    pub delta: Vec<f64>,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    /// `|after_j - before_j|` per term.
    pub max_abs_change: Vec<f64>,
    /// Terms whose value changed at the bit level.
    pub changed_terms: Vec<usize>,
    /// Every term other than `block` is bitwise unchanged.
    pub off_block_unchanged: bool,
    pub pass: bool,
}

/// Perturbs block `k` by `delta` and compares every term bit for bit.
///
/// Passes when no other term moved and, for a nonzero `delta`, term `k` did.
pub fn locality_experiment(
    model: &BlockRidgeModel,
    x: &StateVector,
    k: usize,
    delta: &[f64],
) -> Result<LocalityReport> {
    let perturbed = perturb_block(model, k, delta)?;
    let before = model.term_contributions(x)?;
    let after = perturbed.term_contributions(x)?;
    let changed_terms: Vec<usize> = before
        .iter()
        .zip(&after)
        .enumerate()
        .filter(|(_, (b, a))| b.to_bits() != a.to_bits())
        .map(|(j, _)| j)
        .collect();
    let off_block_unchanged = changed_terms.iter().all(|&j| j == k);
    let target_changed = changed_terms.contains(&k);
    let zero_delta = delta.iter().all(|&d| d == 0.0);
    Ok(LocalityReport {
        block: k,
        delta: delta.to_vec(),
        max_abs_change: before
            .iter()
            .zip(&after)
            .map(|(b, a)| (a - b).abs())
            .collect(),
        before,
        after,
        off_block_unchanged,
        pass: off_block_unchanged && (zero_delta != target_changed),
        changed_terms,
    })
}
