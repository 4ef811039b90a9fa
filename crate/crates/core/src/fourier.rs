//! Exponential ridge model `Re(sum_k c_k exp(i x . w_k))`.
//!
//! Each term `Re(c_k e^{i x.w_k}) = a_k cos(x.w_k) - b_k sin(x.w_k)` is a
//! ridge function of the real projection `x . w_k`.

use nalgebra::{DMatrix, DVector, Dyn, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FourierModelFile", into = "FourierModelFile")]
pub struct FourierRidgeModel {
    directions: Vec<Vec<f64>>,
    coefficients: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierModelFile {
    pub directions: Vec<Vec<f64>>,
    pub coefficients: Vec<[f64; 2]>,
}

impl TryFrom<FourierModelFile> for FourierRidgeModel {
    type Error = Error;

    fn try_from(f: FourierModelFile) -> Result<Self> {
        let coefficients = f
            .coefficients
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        FourierRidgeModel::new(f.directions, coefficients)
    }
}

impl From<FourierRidgeModel> for FourierModelFile {
    fn from(m: FourierRidgeModel) -> Self {
        FourierModelFile {
            directions: m.directions,
            coefficients: m.coefficients.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `exp(i x . w)`.
pub fn fourier_feature(x: &[f64], w: &[f64]) -> Result<Complex64> {
    if x.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            actual: x.len(),
        });
    }
    Ok(Complex64::from_polar(1.0, dot(x, w)))
}

impl FourierRidgeModel {
    pub fn new(directions: Vec<Vec<f64>>, coefficients: Vec<Complex64>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::InvalidModel(
                "Fourier model needs K >= 1 directions".into(),
            ));
        }
        if directions.len() != coefficients.len() {
            return Err(Error::InvalidModel(format!(
                "{} directions but {} coefficients",
                directions.len(),
                coefficients.len()
            )));
        }
        let d = directions[0].len();
        if d == 0 {
            return Err(Error::InvalidModel("directions have dimension 0".into()));
        }
        if let Some(w) = directions.iter().find(|w| w.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: w.len(),
            });
        }
        Ok(Self {
            directions,
            coefficients,
        })
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn n_terms(&self) -> usize {
        self.directions.len()
    }

    pub fn dim(&self) -> usize {
        self.directions[0].len()
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// `Re(c_k exp(i x . w_k))` per term.
    pub fn term_contributions(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self
            .directions
            .iter()
            .zip(&self.coefficients)
            .map(|(w, c)| (c * Complex64::from_polar(1.0, dot(x, w))).re)
            .collect())
    }
}

/// `Re(sum_k c_k exp(i x . w_k))`, summed in term order.
pub fn model_eval(model: &FourierRidgeModel, x: &[f64]) -> Result<f64> {
    Ok(model.term_contributions(x)?.iter().fold(0.0, |a, v| a + v))
}

/// Outcome of a least-squares coefficient fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    /// Root-mean-square residual over the dataset.
    pub residual: f64,
    /// Numerical rank of the real design matrix (at most `2K`).
    pub rank: usize,
    pub rank_deficient: bool,
}

/// Least-squares coefficients for fixed directions.
///
/// The real design matrix has columns `cos(x.w_k)` and `-sin(x.w_k)` for the
/// real and imaginary part of `c_k`. It is solved through an SVD
/// pseudo-inverse, which gives the minimum-norm minimizer when the columns
/// are dependent (for example `w = 0`, or a pair `w, -w`).
pub fn fit_least_squares(
    directions: &[Vec<f64>],
    dataset: &Dataset,
) -> Result<(FourierRidgeModel, FitReport)> {
    let template = FourierRidgeModel::new(
        directions.to_vec(),
        vec![Complex64::new(0.0, 0.0); directions.len()],
    )?;
    if dataset.dim() != template.dim() {
        return Err(Error::DimensionMismatch {
            expected: template.dim(),
            actual: dataset.dim(),
        });
    }
    let k = directions.len();
    let n = dataset.len();
    let design = DMatrix::from_fn(n, 2 * k, |row, col| {
        let t = dot(&dataset.inputs()[row], &directions[col / 2]);
        if col % 2 == 0 {
            t.cos()
        } else {
            -t.sin()
        }
    });
    let y = DVector::from_column_slice(dataset.targets());
    let svd = checked_svd(&design)?;
    let max_sv = svd.singular_values.max();
    let eps = max_sv * (n.max(2 * k) as f64) * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    let solution = svd
        .solve(&y, eps)
        .map_err(|e| Error::InvalidModel(format!("least-squares solve failed: {e}")))?;
    let coefficients = (0..k)
        .map(|j| Complex64::new(solution[2 * j], solution[2 * j + 1]))
        .collect();
    let model = FourierRidgeModel::new(directions.to_vec(), coefficients)?;

    let mut sq = 0.0;
    for (x, t) in dataset.iter() {
        let r = model_eval(&model, x)? - t;
        sq += r * r;
    }
    let report = FitReport {
        residual: (sq / n as f64).sqrt(),
        rank,
        rank_deficient: rank < 2 * k,
    };
    Ok((model, report))
}

type Svd = SVD<f64, Dyn, Dyn>;

fn reconstruction_error(m: &DMatrix<f64>, svd: &Svd) -> f64 {
    match (&svd.u, &svd.v_t) {
        (Some(u), Some(v_t)) => (u * DMatrix::from_diagonal(&svd.singular_values) * v_t - m).norm(),
        _ => f64::INFINITY,
    }
}

/// SVD whose factors reproduce `m` to near machine precision.
///
/// nalgebra's default convergence test can mis-deflate matrices with exactly
/// zero singular values (duplicate or all-zero columns, common in these
/// design matrices) and return factors that do not multiply back to `m`.
/// Each candidate is therefore checked, trying the transpose and a tighter
/// convergence threshold before giving up.
fn checked_svd(m: &DMatrix<f64>) -> Result<Svd> {
    let tol = 1e-12 * m.norm().max(1.0);
    let direct = m.clone().svd(true, true);
    if reconstruction_error(m, &direct) <= tol {
        return Ok(direct);
    }
    let t = m.transpose().svd(true, true);
    let transposed = Svd {
        u: t.v_t.map(|v| v.transpose()),
        v_t: t.u.map(|u| u.transpose()),
        singular_values: t.singular_values,
    };
    if reconstruction_error(m, &transposed) <= tol {
        return Ok(transposed);
    }
    if let Some(tight) = m.clone().try_svd(true, true, 1e-3 * f64::EPSILON, 10_000) {
        if reconstruction_error(m, &tight) <= tol {
            return Ok(tight);
        }
    }
    Err(Error::InvalidModel(
        "SVD of the design matrix did not converge accurately".into(),
    ))
}
