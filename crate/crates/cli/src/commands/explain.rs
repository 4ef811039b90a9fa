use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use qridge::dataset::Dataset;
use qridge::explain::{explain, CONTRIBUTION_TOL};
use qridge::{ModelKind, Trainable};

use crate::commands::parse_model;
use crate::io::{emit, read_dataset, read_text, to_json};
use crate::{Common, Status};

pub enum InputSource {
    Values(String),
    Row(PathBuf, usize),
}

fn load_input(source: InputSource) -> Result<(Vec<f64>, String)> {
    match source {
        InputSource::Values(text) => {
            let x = text
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .with_context(|| format!("invalid input value '{v}'"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((x, "input".to_string()))
        }
        InputSource::Row(path, row) => {
            let data = read_dataset(&path)?;
            ensure!(
                row < data.len(),
                "row {row} out of range for {} rows",
                data.len()
            );
            Ok((data.inputs()[row].clone(), format!("row {row}")))
        }
    }
}

pub fn run(
    common: &Common,
    kind: ModelKind,
    model_path: &Path,
    source: InputSource,
    fd_step: f64,
) -> Result<Status> {
    let tol = common.tol.unwrap_or(CONTRIBUTION_TOL);
    let model = parse_model(kind, &read_text(model_path)?, None)
        .with_context(|| format!("invalid {kind} model {}", model_path.display()))?;
    let (x, input_id) = load_input(source)?;
    model.check_dataset(&Dataset::new(vec![x.clone()], vec![0.0])?)?;

    let report = explain(&model, &x, &input_id, fd_step)?;
    let check = report.check();
    if check.contribution_gap > tol || !check.off_block_nonzero.is_empty() {
        eprintln!(
            "explain: invariants violated (contribution gap {:e}, {} off-block sensitivities); report not written",
            check.contribution_gap,
            check.off_block_nonzero.len()
        );
        return Ok(Status::Fail);
    }
    emit(common.out.as_deref(), &to_json(&report))?;
    Ok(Status::Pass)
}
