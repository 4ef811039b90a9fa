use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use qridge::block::BlockRidgeModel;
use qridge::quantum::{log2_exact, StateVector};
use qridge::training::{locality_experiment, LocalityReport};
use serde::Serialize;

use crate::commands::rng;
use crate::io::{emit, read_text, to_json};
use crate::{Common, Status};

#[derive(Serialize)]
struct SweepReport {
    dimension: usize,
    n_blocks: usize,
    seed: u64,
    delta: f64,
    /// Random input as `[re, im]` pairs.
    input: Vec<[f64; 2]>,
    pass: bool,
    blocks: Vec<LocalityReport>,
}

pub fn run(common: &Common, path: &Path, block: Option<usize>, delta: f64) -> Result<Status> {
    ensure!(delta.is_finite(), "--delta must be finite");
    let model: BlockRidgeModel = serde_json::from_str(&read_text(path)?)
        .with_context(|| format!("invalid block model {}", path.display()))?;
    let Some(params) = model.block_params() else {
        bail!("block model has no block_params; locality needs a parameterized model");
    };
    let seed = common.seed.unwrap_or(0);
    let n_qubits =
        log2_exact(model.dimension()).context("block dimension is not a power of two")?;
    let x = StateVector::random(n_qubits, &mut rng(seed));

    let targets: Vec<usize> = match block {
        Some(k) => {
            ensure!(
                k < model.n_blocks(),
                "block {k} out of range for {} blocks",
                model.n_blocks()
            );
            vec![k]
        }
        None => (0..model.n_blocks()).collect(),
    };
    let blocks = targets
        .into_iter()
        .map(|k| locality_experiment(&model, &x, k, &vec![delta; params[k].len()]))
        .collect::<qridge::Result<Vec<_>>>()?;
    let pass = blocks.iter().all(|r| r.pass);
    for r in &blocks {
        eprintln!(
            "locality: block {} changed terms {:?} -> {}",
            r.block,
            r.changed_terms,
            if r.pass { "ok" } else { "FAIL" }
        );
    }
    let report = SweepReport {
        dimension: model.dimension(),
        n_blocks: model.n_blocks(),
        seed,
        delta,
        input: x.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        pass,
        blocks,
    };
    emit(common.out.as_deref(), &to_json(&report))?;
    Ok(if pass { Status::Pass } else { Status::Fail })
}
