use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::Trainable;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    pub fd_step: f64,
    /// Log the loss every `log_every` epochs; 0 disables logging.
    pub log_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 100,
            seed: 0,
            fd_step: 1e-5,
            log_every: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        // learning_rate = 0 is allowed as a no-update baseline.
        if !(self.learning_rate >= 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "learning_rate must be >= 0, got {}",
                self.learning_rate
            )));
        }
        if self.epochs < 1 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if !(self.fd_step > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "fd_step must be positive, got {}",
                self.fd_step
            )));
        }
        Ok(())
    }
}

/// Full-batch MSE before training and after each epoch's update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossHistory {
    pub initial: f64,
    pub losses: Vec<f64>,
}

impl LossHistory {
    pub fn final_loss(&self) -> f64 {
        *self.losses.last().unwrap_or(&self.initial)
    }

    /// `epoch,mse` rows; epoch 0 is the initial loss.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "epoch,mse")?;
        writeln!(w, "0,{}", self.initial)?;
        for (e, l) in self.losses.iter().enumerate() {
            writeln!(w, "{},{}", e + 1, l)?;
        }
        Ok(())
    }
}

/// Mean of squared differences.
pub fn mse_loss(predictions: &[f64], targets: &[f64]) -> Result<f64> {
    if predictions.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: targets.len(),
            actual: predictions.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::InvalidDataset(
            "cannot take the loss of an empty batch".into(),
        ));
    }
    let sum = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t) * (p - t))
        .fold(0.0, |a, v| a + v);
    Ok(sum / predictions.len() as f64)
}

/// Maps over sample indices, in parallel when enabled. Output order always
/// follows the index order.
fn map_samples<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub(crate) fn dataset_loss<M: Trainable>(model: &M, data: &Dataset) -> Result<f64> {
    let preds = map_samples(data.len(), |i| model.predict(&data.inputs()[i]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    mse_loss(&preds, data.targets())
}

/// Full-batch gradient descent on mean squared error.
///
/// Per-sample gradients may be computed in parallel but are summed in sample
/// order, so the history is independent of the thread count.
pub fn train<M: Trainable>(
    model: &M,
    data: &Dataset,
    config: &TrainConfig,
) -> Result<(M, LossHistory)> {
    config.validate()?;
    model.check_dataset(data)?;
    let initial = dataset_loss(model, data)?;
    let mut current = model.clone();
    let mut params = current.params();
    let mut losses = Vec::with_capacity(config.epochs);
    let n = data.len() as f64;
    for epoch in 1..=config.epochs {
        let per_sample = map_samples(data.len(), |i| {
            current.loss_gradient(&data.inputs()[i], data.targets()[i], config.fd_step)
        });
        let mut grad = vec![0.0; params.len()];
        for g in per_sample {
            for (acc, v) in grad.iter_mut().zip(g?) {
                *acc += v;
            }
        }
        for (p, g) in params.iter_mut().zip(&grad) {
            *p -= config.learning_rate * g / n;
        }
        current = current.with_params(&params)?;
        let loss = dataset_loss(&current, data)?;
        if loss.is_nan() {
            return Err(Error::NanLoss(epoch));
        }
        if config.log_every > 0 && epoch % config.log_every == 0 {
            log::info!("epoch {epoch}: mse {loss:.6e}");
        }
        losses.push(loss);
    }
    Ok((current, LossHistory { initial, losses }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mse_examples() {
        assert_eq!(mse_loss(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mse_loss(&[0.0], &[2.0]).unwrap(), 4.0);
        assert_eq!(mse_loss(&[0.0, 2.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert!(mse_loss(&[0.0], &[1.0, 1.0]).is_err());
        assert!(mse_loss(&[], &[]).is_err());
    }

    #[test]
    fn config_defaults_and_validation() {
        let c: TrainConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, TrainConfig::default());
        assert_eq!(c.fd_step, 1e-5);
        let c: TrainConfig = serde_json::from_str(r#"{"epochs": 3, "seed": 9}"#).unwrap();
        assert_eq!((c.epochs, c.seed, c.learning_rate), (3, 9, 0.1));
        assert!(serde_json::from_str::<TrainConfig>(r#"{"epoch": 3}"#).is_err());
        assert!(TrainConfig {
            epochs: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(TrainConfig {
            learning_rate: -1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn history_csv() {
        let h = LossHistory {
            initial: 1.0,
            losses: vec![0.5, 0.25],
        };
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "epoch,mse\n0,1\n1,0.5\n2,0.25\n"
        );
    }
}

/// Affine map sending the target range onto `[0.05, 0.95]`, for models whose
/// outputs are probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetTransform {
    pub scale: f64,
    pub shift: f64,
}

impl TargetTransform {
    pub const LOW: f64 = 0.05;
    pub const HIGH: f64 = 0.95;

    pub fn identity() -> Self {
        Self {
            scale: 1.0,
            shift: 0.0,
        }
    }

    /// Fits the map to the targets of `data`; a constant target maps to 0.5.
    pub fn fit(data: &Dataset) -> Self {
        let (lo, hi) = data
            .targets()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
                (lo.min(t), hi.max(t))
            });
        if hi > lo {
            let scale = (Self::HIGH - Self::LOW) / (hi - lo);
            Self {
                scale,
                shift: Self::LOW - scale * lo,
            }
        } else {
            Self {
                scale: 0.0,
                shift: 0.5,
            }
        }
    }

    pub fn apply(&self, y: f64) -> f64 {
        self.scale * y + self.shift
    }

    pub fn apply_dataset(&self, data: &Dataset) -> Result<Dataset> {
        data.with_targets(data.targets().iter().map(|&y| self.apply(y)).collect())
    }
}
