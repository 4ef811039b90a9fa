//! Common interface over the four trainable model families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::block::{block_circuit, block_output, BlockRidgeModel};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fourier::{model_eval, FourierRidgeModel};
use crate::quantum::{
    circuit_unitary, first_qubit_zero_selector, log2_exact, selector_expectation,
    MeasurementSelector, ParamCircuit,
};
use crate::ridge::{extract_rows, term_contributions};
use crate::training::{encode_input, finite_diff_gradient, parameter_shift_gradient};
use crate::xnn::{term_contributions_xnn, xnn_eval, xnn_gradient, XnnModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Circuit,
    Block,
    Fourier,
    Xnn,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Circuit,
        ModelKind::Block,
        ModelKind::Fourier,
        ModelKind::Xnn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Circuit => "circuit",
            ModelKind::Block => "block",
            ModelKind::Fourier => "fourier",
            ModelKind::Xnn => "xnn",
        }
    }

    /// Circuit and block outputs are probabilities (sums of them for blocks).
    pub fn is_quantum(self) -> bool {
        matches!(self, ModelKind::Circuit | ModelKind::Block)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidModel(format!("unknown model kind '{s}'")))
    }
}

/// A model with a flat real parameter vector and a per-term decomposition of
/// its prediction.
pub trait Trainable: Clone + Send + Sync {
    fn kind(&self) -> ModelKind;

    /// Input dimension, if the model fixes one.
    fn input_dim(&self) -> Option<usize>;

    fn params(&self) -> Vec<f64>;

    fn with_params(&self, params: &[f64]) -> Result<Self>;

    /// Per-term ridge values. `offset() + sum(terms) == predict()` up to
    /// rounding.
    fn terms(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn offset(&self) -> f64 {
        0.0
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(self.offset() + self.terms(x)?.iter().fold(0.0, |a, v| a + v))
    }

    /// Model with parameter `j` moved by `h`.
    fn perturb_param(&self, j: usize, h: f64) -> Result<Self> {
        let mut p = self.params();
        let len = p.len();
        *p.get_mut(j)
            .ok_or(Error::IndexOutOfRange { index: j, len })? += h;
        self.with_params(&p)
    }

    /// Gradient of the prediction with respect to the parameters.
    fn predict_gradient(&self, x: &[f64], fd_step: f64) -> Result<Vec<f64>> {
        fd_predict_gradient(self, x, fd_step)
    }

    /// Gradient of `(predict(x) - target)^2`.
    fn loss_gradient(&self, x: &[f64], target: f64, fd_step: f64) -> Result<Vec<f64>> {
        let r = 2.0 * (self.predict(x)? - target);
        Ok(self
            .predict_gradient(x, fd_step)?
            .into_iter()
            .map(|g| r * g)
            .collect())
    }

    /// Block index owning each parameter, for models built from independent
    /// blocks.
    fn param_blocks(&self) -> Option<Vec<usize>> {
        None
    }

    fn check_dataset(&self, data: &Dataset) -> Result<()> {
        match self.input_dim() {
            Some(d) if d < data.dim() || (!self.kind().is_quantum() && d != data.dim()) => {
                Err(Error::DimensionMismatch {
                    expected: d,
                    actual: data.dim(),
                })
            }
            _ => Ok(()),
        }
    }
}

fn fd_predict_gradient<M: Trainable>(m: &M, x: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = m.params().len();
    let mut g = Vec::with_capacity(n);
    for j in 0..n {
        let plus = m.perturb_param(j, step)?.predict(x)?;
        let minus = m.perturb_param(j, -step)?.predict(x)?;
        g.push((plus - minus) / (2.0 * step));
    }
    Ok(g)
}

/// A parameterized circuit measured through a selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitModelFile", into = "CircuitModelFile")]
pub struct CircuitModel {
    circuit: ParamCircuit,
    theta: Vec<f64>,
    selector: MeasurementSelector,
}

/// On-disk circuit model. `selector` defaults to "first qubit in |0>".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitModelFile {
    pub circuit: ParamCircuit,
    pub theta: Vec<f64>,
    #[serde(default)]
    pub selector: Option<MeasurementSelector>,
}

impl TryFrom<CircuitModelFile> for CircuitModel {
    type Error = Error;

    fn try_from(f: CircuitModelFile) -> Result<Self> {
        let selector = match f.selector {
            Some(s) => s,
            None => first_qubit_zero_selector(f.circuit.n_qubits())?,
        };
        CircuitModel::new(f.circuit, f.theta, selector)
    }
}

impl From<CircuitModel> for CircuitModelFile {
    fn from(m: CircuitModel) -> Self {
        CircuitModelFile {
            circuit: m.circuit,
            theta: m.theta,
            selector: Some(m.selector),
        }
    }
}

impl CircuitModel {
    pub fn new(
        circuit: ParamCircuit,
        theta: Vec<f64>,
        selector: MeasurementSelector,
    ) -> Result<Self> {
        circuit.check_theta(&theta)?;
        selector.check_dim(circuit.dim())?;
        Ok(Self {
            circuit,
            theta,
            selector,
        })
    }

    pub fn circuit(&self) -> &ParamCircuit {
        &self.circuit
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn selector(&self) -> &MeasurementSelector {
        &self.selector
    }

    fn has_unique_slots(&self) -> bool {
        self.circuit.slot_usage().iter().all(|&c| c == 1)
    }
}

impl Trainable for CircuitModel {
    fn kind(&self) -> ModelKind {
        ModelKind::Circuit
    }

    fn input_dim(&self) -> Option<usize> {
        Some(self.circuit.dim())
    }

    fn params(&self) -> Vec<f64> {
        self.theta.clone()
    }

    fn with_params(&self, params: &[f64]) -> Result<Self> {
        Self::new(self.circuit.clone(), params.to_vec(), self.selector.clone())
    }

    /// Ridge values `|<w_i|x>|^2` read from the rows of the dense unitary.
    fn terms(&self, x: &[f64]) -> Result<Vec<f64>> {
        let state = encode_input(x, self.circuit.n_qubits())?.state;
        let decomp = extract_rows(
            &circuit_unitary(&self.circuit, &self.theta)?,
            &self.selector,
        )?;
        term_contributions(&decomp, &state)
    }

    /// Direct statevector simulation followed by the selector measurement.
    fn predict(&self, x: &[f64]) -> Result<f64> {
        let state = encode_input(x, self.circuit.n_qubits())?.state;
        selector_expectation(&self.circuit.run(&self.theta, &state)?, &self.selector)
    }

    fn predict_gradient(&self, x: &[f64], fd_step: f64) -> Result<Vec<f64>> {
        if self.has_unique_slots() {
            let state = encode_input(x, self.circuit.n_qubits())?.state;
            parameter_shift_gradient(&self.circuit, &self.theta, &self.selector, &state)
        } else {
            log::warn!("circuit shares parameter slots across gates; using finite differences");
            fd_predict_gradient(self, x, fd_step)
        }
    }
}

impl Trainable for BlockRidgeModel {
    fn kind(&self) -> ModelKind {
        ModelKind::Block
    }

    fn input_dim(&self) -> Option<usize> {
        Some(self.dimension())
    }

    fn params(&self) -> Vec<f64> {
        self.block_params().map(|p| p.concat()).unwrap_or_default()
    }

    fn with_params(&self, params: &[f64]) -> Result<Self> {
        let Some(blocks) = self.block_params() else {
            return if params.is_empty() {
                Ok(self.clone())
            } else {
                Err(Error::ParamCountMismatch {
                    expected: 0,
                    actual: params.len(),
                })
            };
        };
        let total: usize = blocks.iter().map(Vec::len).sum();
        if params.len() != total {
            return Err(Error::ParamCountMismatch {
                expected: total,
                actual: params.len(),
            });
        }
        let mut rest = params;
        let split = blocks
            .iter()
            .map(|b| {
                let (head, tail) = rest.split_at(b.len());
                rest = tail;
                head.to_vec()
            })
            .collect();
        BlockRidgeModel::parameterized_with_ties(
            self.dimension(),
            split,
            self.shared_params().to_vec(),
        )
    }

    fn terms(&self, x: &[f64]) -> Result<Vec<f64>> {
        let state = encode_input(x, self.n_qubits())?.state;
        self.term_contributions(&state)
    }

    /// Output of the block-diagonal operator on the replicated input.
    fn predict(&self, x: &[f64]) -> Result<f64> {
        let state = encode_input(x, self.n_qubits())?.state;
        block_output(self, &state)
    }

    /// Moves slot `j` through its block, so tied slots follow it.
    fn perturb_param(&self, j: usize, h: f64) -> Result<Self> {
        let blocks = self.block_params().ok_or(Error::UnparameterizedBlock(0))?;
        let owners = self.param_blocks().unwrap_or_default();
        let &b = owners.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: owners.len(),
        })?;
        let offset: usize = blocks[..b].iter().map(Vec::len).sum();
        let mut p = blocks[b].clone();
        p[j - offset] += h;
        self.with_block_params(b, p)
    }

    /// Each block term is `|(W_k x)_0|^2`, so the shift rule applies per block
    /// with the selector `{0}`. Gradients of different blocks never mix.
    fn predict_gradient(&self, x: &[f64], fd_step: f64) -> Result<Vec<f64>> {
        let Some(blocks) = self.block_params() else {
            return Ok(Vec::new());
        };
        if !self.shared_params().is_empty() {
            return fd_predict_gradient(self, x, fd_step);
        }
        let state = encode_input(x, self.n_qubits())?.state;
        let first = MeasurementSelector::new(vec![0], self.dimension())?;
        let mut g = Vec::new();
        for p in blocks {
            let circuit = block_circuit(self.dimension(), p.len())?;
            g.extend(parameter_shift_gradient(&circuit, p, &first, &state)?);
        }
        Ok(g)
    }

    fn param_blocks(&self) -> Option<Vec<usize>> {
        self.block_params().map(|b| {
            b.iter()
                .enumerate()
                .flat_map(|(k, p)| std::iter::repeat_n(k, p.len()))
                .collect()
        })
    }
}

impl BlockRidgeModel {
    fn n_qubits(&self) -> usize {
        log2_exact(self.dimension()).expect("block dimension is a power of two")
    }
}

impl Trainable for FourierRidgeModel {
    fn kind(&self) -> ModelKind {
        ModelKind::Fourier
    }

    fn input_dim(&self) -> Option<usize> {
        Some(self.dim())
    }

    /// `[re c_1, im c_1, ..., re c_K, im c_K, w_1, ..., w_K]`.
    fn params(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self
            .coefficients()
            .iter()
            .flat_map(|c| [c.re, c.im])
            .collect();
        p.extend(self.directions().iter().flatten());
        p
    }

    fn with_params(&self, params: &[f64]) -> Result<Self> {
        let (k, d) = (self.n_terms(), self.dim());
        if params.len() != k * (2 + d) {
            return Err(Error::ParamCountMismatch {
                expected: k * (2 + d),
                actual: params.len(),
            });
        }
        let (coef, dirs) = params.split_at(2 * k);
        FourierRidgeModel::new(
            dirs.chunks(d).map(<[f64]>::to_vec).collect(),
            coef.chunks(2)
                .map(|c| num_complex::Complex64::new(c[0], c[1]))
                .collect(),
        )
    }

    fn terms(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.term_contributions(x)
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        model_eval(self, x)
    }

    fn predict_gradient(&self, x: &[f64], _fd_step: f64) -> Result<Vec<f64>> {
        let (k, d) = (self.n_terms(), self.dim());
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: x.len(),
            });
        }
        let mut g = vec![0.0; k * (2 + d)];
        for (j, (w, c)) in self
            .directions()
            .iter()
            .zip(self.coefficients())
            .enumerate()
        {
            let t: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
            let (s, co) = t.sin_cos();
            g[2 * j] = co;
            g[2 * j + 1] = -s;
            // d/dt (a cos t - b sin t) = -a sin t - b cos t
            let dt = -c.re * s - c.im * co;
            for (i, xi) in x.iter().enumerate() {
                g[2 * k + j * d + i] = dt * xi;
            }
        }
        Ok(g)
    }
}

impl Trainable for XnnModel {
    fn kind(&self) -> ModelKind {
        ModelKind::Xnn
    }

    fn input_dim(&self) -> Option<usize> {
        XnnModel::input_dim(self)
    }

    fn params(&self) -> Vec<f64> {
        XnnModel::params(self)
    }

    fn with_params(&self, params: &[f64]) -> Result<Self> {
        XnnModel::with_params(self, params)
    }

    fn terms(&self, x: &[f64]) -> Result<Vec<f64>> {
        term_contributions_xnn(self, x)
    }

    fn offset(&self) -> f64 {
        self.mu
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        xnn_eval(self, x)
    }

    fn predict_gradient(&self, x: &[f64], _fd_step: f64) -> Result<Vec<f64>> {
        term_contributions_xnn(self, x)?;
        let mut g = vec![1.0];
        let z: Vec<f64> = self
            .directions
            .iter()
            .map(|w| w.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        g.extend(z.iter().map(|&z| self.activation.apply(z)));
        for (gamma, &z) in self.gammas.iter().zip(&z) {
            let scale = gamma * self.activation.derivative(z);
            g.extend(x.iter().map(|xi| scale * xi));
        }
        Ok(g)
    }

    fn loss_gradient(&self, x: &[f64], target: f64, _fd_step: f64) -> Result<Vec<f64>> {
        Ok(xnn_gradient(self, x, target)?.to_vec())
    }
}

/// Any of the four model families.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Circuit(CircuitModel),
    Block(BlockRidgeModel),
    Fourier(FourierRidgeModel),
    Xnn(XnnModel),
}

macro_rules! dispatch {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            Model::Circuit($m) => $body,
            Model::Block($m) => $body,
            Model::Fourier($m) => $body,
            Model::Xnn($m) => $body,
        }
    };
}

macro_rules! from_variant {
    ($($variant:ident($ty:ty)),*) => {
        $(impl From<$ty> for Model {
            fn from(m: $ty) -> Self {
                Model::$variant(m)
            }
        })*
    };
}

from_variant!(
    Circuit(CircuitModel),
    Block(BlockRidgeModel),
    Fourier(FourierRidgeModel),
    Xnn(XnnModel)
);

impl Model {
    /// Parses the JSON model format of `kind`.
    pub fn from_json(kind: ModelKind, json: &str) -> Result<Self> {
        let err = |e: serde_json::Error| Error::InvalidModel(e.to_string());
        Ok(match kind {
            ModelKind::Circuit => Model::Circuit(serde_json::from_str(json).map_err(err)?),
            ModelKind::Block => Model::Block(serde_json::from_str(json).map_err(err)?),
            ModelKind::Fourier => Model::Fourier(serde_json::from_str(json).map_err(err)?),
            ModelKind::Xnn => {
                let m: XnnModel = serde_json::from_str(json).map_err(err)?;
                m.validate()?;
                Model::Xnn(m)
            }
        })
    }

    pub fn to_json(&self) -> String {
        let s = dispatch!(self, m => serde_json::to_string_pretty(m));
        s.expect("model types serialize infallibly")
    }
}

impl Trainable for Model {
    fn kind(&self) -> ModelKind {
        dispatch!(self, m => m.kind())
    }

    fn input_dim(&self) -> Option<usize> {
        dispatch!(self, m => m.input_dim())
    }

    fn params(&self) -> Vec<f64> {
        dispatch!(self, m => m.params())
    }

    fn with_params(&self, params: &[f64]) -> Result<Self> {
        Ok(match self {
            Model::Circuit(m) => Model::Circuit(m.with_params(params)?),
            Model::Block(m) => Model::Block(m.with_params(params)?),
            Model::Fourier(m) => Model::Fourier(m.with_params(params)?),
            Model::Xnn(m) => Model::Xnn(m.with_params(params)?),
        })
    }

    fn terms(&self, x: &[f64]) -> Result<Vec<f64>> {
        dispatch!(self, m => m.terms(x))
    }

    fn offset(&self) -> f64 {
        dispatch!(self, m => m.offset())
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        dispatch!(self, m => m.predict(x))
    }

    fn perturb_param(&self, j: usize, h: f64) -> Result<Self> {
        Ok(match self {
            Model::Circuit(m) => Model::Circuit(m.perturb_param(j, h)?),
            Model::Block(m) => Model::Block(m.perturb_param(j, h)?),
            Model::Fourier(m) => Model::Fourier(m.perturb_param(j, h)?),
            Model::Xnn(m) => Model::Xnn(m.perturb_param(j, h)?),
        })
    }

    fn predict_gradient(&self, x: &[f64], fd_step: f64) -> Result<Vec<f64>> {
        dispatch!(self, m => m.predict_gradient(x, fd_step))
    }

    fn loss_gradient(&self, x: &[f64], target: f64, fd_step: f64) -> Result<Vec<f64>> {
        dispatch!(self, m => m.loss_gradient(x, target, fd_step))
    }

    fn param_blocks(&self) -> Option<Vec<usize>> {
        dispatch!(self, m => m.param_blocks())
    }

    fn check_dataset(&self, data: &Dataset) -> Result<()> {
        dispatch!(self, m => m.check_dataset(data))
    }
}

/// Finite-difference gradient of the prediction; used as an oracle in tests.
pub fn fd_gradient_of<M: Trainable>(m: &M, x: &[f64], step: f64) -> Result<Vec<f64>> {
    let base = m.params();
    let eval = |p: &[f64]| {
        m.with_params(p)
            .and_then(|mm| mm.predict(x))
            .unwrap_or(f64::NAN)
    };
    Ok(finite_diff_gradient(eval, &base, step))
}
