//! Classical explainable network `mu + sum_k gamma_k f(w_k . x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Identity,
    Tanh,
    Sigmoid,
    Sine,
}

impl Activation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Identity => z,
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Activation::Sine => z.sin(),
        }
    }

    pub fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Tanh => 1.0 - z.tanh().powi(2),
            Activation::Sigmoid => {
                let s = 1.0 / (1.0 + (-z).exp());
                s * (1.0 - s)
            }
            Activation::Sine => z.cos(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XnnModel {
    pub mu: f64,
    pub gammas: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
    pub activation: Activation,
}

/// Partials of `(prediction - target)^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XnnGradient {
    pub mu: f64,
    pub gammas: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
}

impl XnnGradient {
    /// Flattened in the same order as [`XnnModel::params`].
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![self.mu];
        v.extend(&self.gammas);
        v.extend(self.directions.iter().flatten());
        v
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl XnnModel {
    pub fn new(
        mu: f64,
        gammas: Vec<f64>,
        directions: Vec<Vec<f64>>,
        activation: Activation,
    ) -> Result<Self> {
        let m = Self {
            mu,
            gammas,
            directions,
            activation,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gammas.len() != self.directions.len() {
            return Err(Error::InvalidModel(format!(
                "{} gammas but {} directions",
                self.gammas.len(),
                self.directions.len()
            )));
        }
        if let Some(d) = self.input_dim() {
            if let Some(w) = self.directions.iter().find(|w| w.len() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: w.len(),
                });
            }
        }
        Ok(())
    }

    pub fn n_terms(&self) -> usize {
        self.gammas.len()
    }

    /// `None` when `K = 0`: the model is a constant and accepts any input.
    pub fn input_dim(&self) -> Option<usize> {
        self.directions.first().map(Vec::len)
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        match self.input_dim() {
            Some(d) if d != x.len() => Err(Error::DimensionMismatch {
                expected: d,
                actual: x.len(),
            }),
            _ => Ok(()),
        }
    }

    /// `[mu, gamma_1..gamma_K, w_1, ..., w_K]`.
    pub fn params(&self) -> Vec<f64> {
        let mut p = vec![self.mu];
        p.extend(&self.gammas);
        p.extend(self.directions.iter().flatten());
        p
    }

    pub fn with_params(&self, p: &[f64]) -> Result<Self> {
        let expected = self.params().len();
        if p.len() != expected {
            return Err(Error::ParamCountMismatch {
                expected,
                actual: p.len(),
            });
        }
        let k = self.n_terms();
        let d = self.input_dim().unwrap_or(0);
        Ok(Self {
            mu: p[0],
            gammas: p[1..=k].to_vec(),
            directions: p[1 + k..]
                .chunks(d.max(1))
                .take(k)
                .map(<[f64]>::to_vec)
                .collect(),
            activation: self.activation,
        })
    }
}

/// `gamma_k f(w_k . x)` per term.
pub fn term_contributions_xnn(model: &XnnModel, x: &[f64]) -> Result<Vec<f64>> {
    model.check_input(x)?;
    Ok(model
        .gammas
        .iter()
        .zip(&model.directions)
        .map(|(g, w)| g * model.activation.apply(dot(w, x)))
        .collect())
}

/// `mu + sum_k gamma_k f(w_k . x)`; the sum is formed first, then `mu` added.
pub fn xnn_eval(model: &XnnModel, x: &[f64]) -> Result<f64> {
    Ok(model.mu
        + term_contributions_xnn(model, x)?
            .iter()
            .fold(0.0, |a, v| a + v))
}

/// Analytic gradient of `(xnn_eval(x) - target)^2`.
pub fn xnn_gradient(model: &XnnModel, x: &[f64], target: f64) -> Result<XnnGradient> {
    let r = 2.0 * (xnn_eval(model, x)? - target);
    let mut gammas = Vec::with_capacity(model.n_terms());
    let mut directions = Vec::with_capacity(model.n_terms());
    for (g, w) in model.gammas.iter().zip(&model.directions) {
        let z = dot(w, x);
        gammas.push(r * model.activation.apply(z));
        let scale = r * g * model.activation.derivative(z);
        directions.push(x.iter().map(|xi| scale * xi).collect());
    }
    Ok(XnnGradient {
        mu: r,
        gammas,
        directions,
    })
}
