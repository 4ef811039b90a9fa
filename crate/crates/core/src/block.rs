//! Independent-row construction.
//!
//! Each weight vector `w_k` becomes the leading row of its own unitary `V_k`.
//! The direct sum `V = V_1 (+) ... (+) V_K` acts on `K` stacked copies of the
//! input, and summing `|psi_i|^2` over `i mod N == 0` recovers
//! `sum_k |<w_k|x>|^2`. Because blocks never share entries, changing one
//! block's parameters can only move its own term.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{
    circuit_unitary, hardware_efficient_ansatz, log2_exact, norm_sqr, row_dot, ParamCircuit,
    StateVector, UnitaryMatrix,
};

/// Dense materialization of the block-diagonal operator is only allowed up to
/// this total dimension.
pub const MAX_DENSE_BLOCK_DIM: usize = 64;

const UNIT_ROW_TOL: f64 = 1e-10;
const COMPLETION_INPUT_TOL: f64 = 1e-9;

/// Unitary whose first row is a given unit vector `w`, stored implicitly.
///
/// With `u = conj(w)` and `u_0 = |u_0| e^{i phi}`, the reflector
/// `H = I - 2 v v^dag / |v|^2`, `v = u + e^{i phi} e_0`, sends `e_0` to
/// `-e^{-i phi} u`. Then `V = diag(-e^{-i phi}, 1, ..., 1) H` has row 0 equal
/// to `w`. Adding (not subtracting) `e^{i phi} e_0` keeps `|v|^2 >= 2`, so
/// there is no cancellation when `w` is close to `e_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HouseholderCompletion {
    v: Vec<Complex64>,
    scale: f64,
    lead_phase: Complex64,
}

impl HouseholderCompletion {
    pub fn new(w: &[Complex64]) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::NotUnit(0.0));
        }
        let norm = norm_sqr(w).sqrt();
        if !((norm - 1.0).abs() <= COMPLETION_INPUT_TOL) {
            return Err(Error::NotUnit(norm));
        }
        let mut v: Vec<Complex64> = w.iter().map(|z| z.conj() / norm).collect();
        let phase = if v[0] == Complex64::new(0.0, 0.0) {
            Complex64::new(1.0, 0.0)
        } else {
            v[0] / v[0].norm()
        };
        v[0] += phase;
        let scale = 2.0 / norm_sqr(&v);
        Ok(Self {
            v,
            scale,
            lead_phase: -phase.conj(),
        })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// `V x` in `O(N)`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let proj = crate::quantum::inner(&self.v, x) * self.scale;
        let mut y: Vec<Complex64> = x
            .iter()
            .zip(&self.v)
            .map(|(xi, vi)| xi - vi * proj)
            .collect();
        y[0] *= self.lead_phase;
        y
    }

    pub fn to_matrix(&self) -> UnitaryMatrix {
        let n = self.dim();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            let d = if i == 0 {
                self.lead_phase
            } else {
                Complex64::new(1.0, 0.0)
            };
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                entries.push(
                    d * (Complex64::new(delta, 0.0) - self.v[i] * self.v[j].conj() * self.scale),
                );
            }
        }
        UnitaryMatrix::new_unchecked(n, entries)
    }
}

/// Completes a unit row vector to a unitary with that vector as row 0.
pub fn complete_unitary(w: &[Complex64]) -> Result<UnitaryMatrix> {
    let m = HouseholderCompletion::new(w)?.to_matrix();
    let defect = m.unitarity_defect();
    if !(defect < crate::quantum::UNITARY_TOL) {
        return Err(Error::NotUnitary(defect));
    }
    Ok(m)
}

/// Two parameter slots that are one underlying parameter: slot `slot` of
/// block `block` and slot `with_slot` of block `with_block`.
///
/// Only used to model circuits where a single angle feeds several rows; a
/// model with ties no longer has independent blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharedParam {
    pub block: usize,
    pub slot: usize,
    pub with_block: usize,
    pub with_slot: usize,
}

/// `K` unit rows of dimension `N`, optionally generated by per-block circuits.
///
/// When `block_params` is present, row `k` is row 0 of the
/// hardware-efficient ansatz on `log2 N` qubits evaluated at
/// `block_params[k]`; the number of layers is `len / (2 log2 N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockModelFile", into = "BlockModelFile")]
pub struct BlockRidgeModel {
    dimension: usize,
    rows: Vec<Vec<Complex64>>,
    block_params: Option<Vec<Vec<f64>>>,
    shared_params: Vec<SharedParam>,
}

/// On-disk form: rows as lists of `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockModelFile {
    pub dimension: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_params: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shared_params: Vec<SharedParam>,
}

impl TryFrom<BlockModelFile> for BlockRidgeModel {
    type Error = Error;

    fn try_from(f: BlockModelFile) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = f
            .rows
            .iter()
            .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        match f.block_params {
            None => {
                if !f.shared_params.is_empty() {
                    return Err(Error::InvalidModel(
                        "shared_params requires block_params".into(),
                    ));
                }
                let m = BlockRidgeModel::from_rows(rows)?;
                if m.dimension != f.dimension {
                    return Err(Error::DimensionMismatch {
                        expected: f.dimension,
                        actual: m.dimension,
                    });
                }
                Ok(m)
            }
            Some(params) => {
                let m =
                    BlockRidgeModel::parameterized_with_ties(f.dimension, params, f.shared_params)?;
                if rows.len() != m.rows.len() {
                    return Err(Error::InvalidModel(format!(
                        "{} rows given but {} blocks parameterized",
                        rows.len(),
                        m.rows.len()
                    )));
                }
                for (k, (given, generated)) in rows.iter().zip(&m.rows).enumerate() {
                    let consistent = given.len() == generated.len()
                        && given
                            .iter()
                            .zip(generated)
                            .all(|(a, b)| (a - b).norm() < 1e-9);
                    if !consistent {
                        return Err(Error::InvalidModel(format!(
                            "row {k} does not match the row generated from block_params[{k}]"
                        )));
                    }
                }
                Ok(m)
            }
        }
    }
}

impl From<BlockRidgeModel> for BlockModelFile {
    fn from(m: BlockRidgeModel) -> Self {
        BlockModelFile {
            dimension: m.dimension,
            rows: m
                .rows
                .iter()
                .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            block_params: m.block_params,
            shared_params: m.shared_params,
        }
    }
}

/// Row 0 of the per-block ansatz at `params`.
pub fn block_row(dimension: usize, params: &[f64]) -> Result<Vec<Complex64>> {
    let circuit = block_circuit(dimension, params.len())?;
    Ok(circuit_unitary(&circuit, params)?.row(0).to_vec())
}

/// The per-block ansatz for `n_params` parameters over a `dimension`-dim row.
pub fn block_circuit(dimension: usize, n_params: usize) -> Result<ParamCircuit> {
    let n = log2_exact(dimension).filter(|&n| n >= 1).ok_or_else(|| {
        Error::InvalidModel(format!("dimension {dimension} is not a power of two >= 2"))
    })?;
    if n_params == 0 || !n_params.is_multiple_of(2 * n) {
        return Err(Error::InvalidModel(format!(
            "block parameter count {n_params} is not a positive multiple of {}",
            2 * n
        )));
    }
    hardware_efficient_ansatz(n, n_params / (2 * n))
}

impl BlockRidgeModel {
    /// Fixed rows with no generating parameters.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dimension = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || dimension == 0 {
            return Err(Error::InvalidModel(
                "block model needs at least one non-empty row".into(),
            ));
        }
        if log2_exact(dimension).is_none() {
            return Err(Error::NotPowerOfTwo(dimension));
        }
        if rows.len() > dimension {
            return Err(Error::InvalidModel(format!(
                "K = {} exceeds N = {dimension}",
                rows.len()
            )));
        }
        for (k, r) in rows.iter().enumerate() {
            if r.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    actual: r.len(),
                });
            }
            let norm = norm_sqr(r).sqrt();
            if !((norm - 1.0).abs() < UNIT_ROW_TOL) {
                return Err(Error::InvalidModel(format!("row {k} has norm {norm}")));
            }
        }
        Ok(Self {
            dimension,
            rows,
            block_params: None,
            shared_params: Vec::new(),
        })
    }

    /// Rows generated from per-block circuit parameters.
    pub fn parameterized(dimension: usize, block_params: Vec<Vec<f64>>) -> Result<Self> {
        Self::parameterized_with_ties(dimension, block_params, Vec::new())
    }

    pub fn parameterized_with_ties(
        dimension: usize,
        block_params: Vec<Vec<f64>>,
        shared_params: Vec<SharedParam>,
    ) -> Result<Self> {
        if block_params.is_empty() || block_params.len() > dimension {
            return Err(Error::InvalidModel(format!(
                "need 1 <= K <= N, got K = {} and N = {dimension}",
                block_params.len()
            )));
        }
        for t in &shared_params {
            for (b, s) in [(t.block, t.slot), (t.with_block, t.with_slot)] {
                let len = block_params
                    .get(b)
                    .map(Vec::len)
                    .ok_or(Error::IndexOutOfRange {
                        index: b,
                        len: block_params.len(),
                    })?;
                if s >= len {
                    return Err(Error::IndexOutOfRange { index: s, len });
                }
            }
            if block_params[t.block][t.slot] != block_params[t.with_block][t.with_slot] {
                return Err(Error::InvalidModel(format!(
                    "tied slots {t:?} hold different values"
                )));
            }
        }
        let rows = block_params
            .iter()
            .map(|p| block_row(dimension, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dimension,
            rows,
            block_params: Some(block_params),
            shared_params,
        })
    }

    /// `k` blocks over `n_qubits`, each a `layers`-layer ansatz with angles
    /// uniform in `[-pi, pi)`.
    pub fn random<R: Rng + ?Sized>(
        n_qubits: usize,
        k: usize,
        layers: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let n_params = 2 * n_qubits * layers;
        let params = (0..k)
            .map(|_| {
                (0..n_params)
                    .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                    .collect()
            })
            .collect();
        Self::parameterized(1 << n_qubits, params)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn n_blocks(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    pub fn block_params(&self) -> Option<&[Vec<f64>]> {
        self.block_params.as_deref()
    }

    pub fn shared_params(&self) -> &[SharedParam] {
        &self.shared_params
    }

    pub fn is_parameterized(&self) -> bool {
        self.block_params.is_some()
    }

    /// Per-block `|<w_k|x>|^2`, each computed from row `k` alone.
    pub fn term_contributions(&self, x: &StateVector) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self
            .rows
            .iter()
            .map(|r| row_dot(r, x.amplitudes()).norm_sqr())
            .collect())
    }

    pub(crate) fn check_input(&self, x: &StateVector) -> Result<()> {
        if x.dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.dim(),
            });
        }
        Ok(())
    }

    /// Replaces the parameters of block `k` (and anything tied to them),
    /// regenerating only the rows whose parameters changed.
    pub(crate) fn with_block_params(&self, k: usize, new_params: Vec<f64>) -> Result<Self> {
        let params = self
            .block_params
            .as_ref()
            .ok_or(Error::UnparameterizedBlock(k))?;
        let old = params.get(k).ok_or(Error::IndexOutOfRange {
            index: k,
            len: params.len(),
        })?;
        if new_params.len() != old.len() {
            return Err(Error::ParamCountMismatch {
                expected: old.len(),
                actual: new_params.len(),
            });
        }
        let mut params = params.clone();
        let mut touched = vec![false; params.len()];
        for (s, (&new, &prev)) in new_params.iter().zip(old).enumerate() {
            if new.to_bits() == prev.to_bits() {
                continue;
            }
            touched[k] = true;
            for t in &self.shared_params {
                if (t.block, t.slot) == (k, s) {
                    params[t.with_block][t.with_slot] = new;
                    touched[t.with_block] = true;
                } else if (t.with_block, t.with_slot) == (k, s) {
                    params[t.block][t.slot] = new;
                    touched[t.block] = true;
                }
            }
        }
        params[k] = new_params;
        let mut rows = self.rows.clone();
        for (j, _) in touched.iter().enumerate().filter(|(_, &t)| t) {
            rows[j] = block_row(self.dimension, &params[j])?;
        }
        Ok(Self {
            dimension: self.dimension,
            rows,
            block_params: Some(params),
            shared_params: self.shared_params.clone(),
        })
    }
}

/// Completed unitaries `V_k`, one per row.
pub fn build_block_diagonal(model: &BlockRidgeModel) -> Result<Vec<UnitaryMatrix>> {
    model.rows.iter().map(|r| complete_unitary(r)).collect()
}

/// Row-major dense `KN x KN` matrix of the direct sum. Test-scale only.
pub fn dense_block_diagonal(model: &BlockRidgeModel) -> Result<Vec<Complex64>> {
    let (k, n) = (model.n_blocks(), model.dimension());
    let total = k * n;
    if total > MAX_DENSE_BLOCK_DIM {
        return Err(Error::InvalidModel(format!(
            "dense block-diagonal of dimension {total} exceeds {MAX_DENSE_BLOCK_DIM}"
        )));
    }
    let mut dense = vec![Complex64::new(0.0, 0.0); total * total];
    for (b, v) in build_block_diagonal(model)?.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                dense[(b * n + i) * total + b * n + j] = v.get(i, j);
            }
        }
    }
    Ok(dense)
}

/// `K` blocks of size `N`, unit norm overall.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedState {
    amplitudes: Vec<Complex64>,
    block_size: usize,
}

impl StackedState {
    pub fn new(amplitudes: Vec<Complex64>, block_size: usize) -> Result<Self> {
        if block_size == 0 || amplitudes.is_empty() || !amplitudes.len().is_multiple_of(block_size)
        {
            return Err(Error::DimensionMismatch {
                expected: block_size,
                actual: amplitudes.len(),
            });
        }
        Ok(Self {
            amplitudes,
            block_size,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn n_blocks(&self) -> usize {
        self.amplitudes.len() / self.block_size
    }

    pub fn block(&self, k: usize) -> &[Complex64] {
        &self.amplitudes[k * self.block_size..(k + 1) * self.block_size]
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }
}

/// `(x; x; ...; x) / sqrt(K)`.
///
/// Plain stacking has norm `sqrt(K)`; the `1/sqrt(K)` keeps the state
/// physical and [`mod_selector_output`] multiplies by `K` to compensate.
pub fn replicate_input(x: &StateVector, k: usize) -> Result<StackedState> {
    if k < 1 {
        return Err(Error::InvalidModel(
            "replication count must be at least 1".into(),
        ));
    }
    let s = 1.0 / (k as f64).sqrt();
    let amplitudes = std::iter::repeat_n(x.amplitudes(), k)
        .flat_map(|a| a.iter().map(|z| z * s))
        .collect();
    StackedState::new(amplitudes, x.dim())
}

/// `V (x; ...; x) / sqrt(K)`, block by block.
pub fn apply_block_model(model: &BlockRidgeModel, x: &StateVector) -> Result<StackedState> {
    model.check_input(x)?;
    let stacked = replicate_input(x, model.n_blocks())?;
    let mut out = Vec::with_capacity(stacked.amplitudes.len());
    for (k, row) in model.rows.iter().enumerate() {
        out.extend(HouseholderCompletion::new(row)?.apply(stacked.block(k)));
    }
    StackedState::new(out, model.dimension)
}

/// `K * sum_{i mod N == 0} |psi_i|^2`.
pub fn mod_selector_output(psi: &StackedState) -> Result<f64> {
    let k = psi.n_blocks();
    let sum = (0..k)
        .map(|b| psi.amplitudes[b * psi.block_size].norm_sqr())
        .fold(0.0, |a, v| a + v);
    Ok(k as f64 * sum)
}

/// Model output through the block-diagonal operator.
pub fn block_output(model: &BlockRidgeModel, x: &StateVector) -> Result<f64> {
    mod_selector_output(&apply_block_model(model, x)?)
}

/// Shifts the parameters of block `k` by `delta` and regenerates its row.
pub fn perturb_block(model: &BlockRidgeModel, k: usize, delta: &[f64]) -> Result<BlockRidgeModel> {
    let params = model
        .block_params
        .as_ref()
        .ok_or(Error::UnparameterizedBlock(k))?;
    let current = params.get(k).ok_or(Error::IndexOutOfRange {
        index: k,
        len: params.len(),
    })?;
    if delta.len() != current.len() {
        return Err(Error::ParamCountMismatch {
            expected: current.len(),
            actual: delta.len(),
        });
    }
    if delta.iter().all(|&d| d == 0.0) {
        return Ok(model.clone());
    }
    let shifted = current.iter().zip(delta).map(|(p, d)| p + d).collect();
    model.with_block_params(k, shifted)
}
