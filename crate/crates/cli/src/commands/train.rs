use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qridge::training::{train, TargetTransform, TrainConfig};
use qridge::{ModelKind, Trainable};
use serde::Serialize;

use crate::commands::parse_model;
use crate::io::{read_dataset, read_text, to_json, write_atomic};
use crate::{Common, Status};

pub struct TrainArgs {
    pub kind: ModelKind,
    pub model: PathBuf,
    pub data: PathBuf,
    pub config: Option<PathBuf>,
    pub history: Option<PathBuf>,
    pub rescale: bool,
}

#[derive(Serialize)]
struct TrainSummary<'a> {
    kind: ModelKind,
    n_samples: usize,
    n_params: usize,
    config: &'a TrainConfig,
    /// Training targets were `scale * y + shift`.
    target_transform: TargetTransform,
    initial_loss: f64,
    final_loss: f64,
    model: &'a Path,
    history: &'a Path,
}

pub fn run(common: &Common, args: TrainArgs) -> Result<Status> {
    let out = common
        .out
        .as_deref()
        .context("train needs --out for the trained model")?;
    let mut config: TrainConfig = match &args.config {
        Some(path) => serde_json::from_str(&read_text(path)?)
            .with_context(|| format!("invalid config {}", path.display()))?,
        None => TrainConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    config.validate()?;

    let model = parse_model(args.kind, &read_text(&args.model)?, Some(config.seed))
        .with_context(|| format!("invalid {} model {}", args.kind, args.model.display()))?;
    let raw = read_dataset(&args.data)?;
    let transform = if args.rescale && args.kind.is_quantum() {
        TargetTransform::fit(&raw)
    } else {
        TargetTransform::identity()
    };
    let data = transform.apply_dataset(&raw)?;

    let (trained, history) = train(&model, &data, &config)?;

    let history_path = args
        .history
        .unwrap_or_else(|| out.with_extension("history.csv"));
    let mut csv = Vec::new();
    history.write_csv(&mut csv)?;
    write_atomic(out, trained.to_json().as_bytes())?;
    write_atomic(&history_path, &csv)?;

    let summary = TrainSummary {
        kind: args.kind,
        n_samples: data.len(),
        n_params: trained.params().len(),
        config: &config,
        target_transform: transform,
        initial_loss: history.initial,
        final_loss: history.final_loss(),
        model: out,
        history: &history_path,
    };
    print!("{}", to_json(&summary));
    Ok(Status::Pass)
}
