use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Real-valued inputs of a fixed dimension with scalar targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    inputs: Vec<Vec<f64>>,
    targets: Vec<f64>,
}

impl Dataset {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::InvalidDataset("dataset is empty".into()));
        }
        if inputs.len() != targets.len() {
            return Err(Error::InvalidDataset(format!(
                "{} inputs but {} targets",
                inputs.len(),
                targets.len()
            )));
        }
        let d = inputs[0].len();
        if d == 0 {
            return Err(Error::InvalidDataset("inputs have dimension 0".into()));
        }
        if let Some(i) = inputs.iter().position(|x| x.len() != d) {
            return Err(Error::InvalidDataset(format!(
                "row {i} has dimension {} (expected {d})",
                inputs[i].len()
            )));
        }
        Ok(Self { inputs, targets })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inputs[0].len()
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.inputs
            .iter()
            .map(Vec::as_slice)
            .zip(self.targets.iter().copied())
    }

    pub fn with_targets(&self, targets: Vec<f64>) -> Result<Self> {
        Self::new(self.inputs.clone(), targets)
    }

    /// Reads `x0,...,x(d-1),y` with a header row.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::InvalidDataset(e.to_string()))?
            .clone();
        let d = headers
            .len()
            .checked_sub(1)
            .filter(|&d| d > 0)
            .ok_or_else(|| {
                Error::InvalidDataset("header must name at least one input column and y".into())
            })?;
        for (j, h) in headers.iter().take(d).enumerate() {
            if h != format!("x{j}") {
                return Err(Error::InvalidDataset(format!(
                    "column {j} is '{h}', expected 'x{j}'"
                )));
            }
        }
        if &headers[d] != "y" {
            return Err(Error::InvalidDataset(format!(
                "last column is '{}', expected 'y'",
                &headers[d]
            )));
        }
        let mut inputs = Vec::new();
        let mut targets = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::InvalidDataset(e.to_string()))?;
            let values = record
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidDataset(format!("row {}: {e}", line + 1)))?;
            if values.len() != d + 1 {
                return Err(Error::InvalidDataset(format!(
                    "row {} has {} fields",
                    line + 1,
                    values.len()
                )));
            }
            targets.push(values[d]);
            inputs.push(values[..d].to_vec());
        }
        Self::new(inputs, targets)
    }

    pub fn to_csv<W: Write>(&self, writer: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidDataset(e.to_string());
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (0..self.dim()).map(|j| format!("x{j}")).collect();
        header.push("y".into());
        w.write_record(&header).map_err(io)?;
        for (x, y) in self.iter() {
            let row: Vec<String> = x
                .iter()
                .chain(std::iter::once(&y))
                .map(|v| v.to_string())
                .collect();
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidDataset(e.to_string()))
    }
}

/// Two isotropic Gaussian blobs in the plane, labelled 1 and 0.
///
/// Class 1 is centred on `(1.5, 0)` and class 0 on `(0, 1.5)`, both with
/// standard deviation 0.3, so the classes differ mainly in direction. Labels
/// alternate, starting with 1.
pub fn two_blobs(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(n);
    for i in 0..n {
        let label = if i % 2 == 0 { 1.0 } else { 0.0 };
        let (cx, cy) = if label == 1.0 { (1.5, 0.0) } else { (0.0, 1.5) };
        let dx: f64 = rng.sample(StandardNormal);
        let dy: f64 = rng.sample(StandardNormal);
        inputs.push(vec![cx + 0.3 * dx, cy + 0.3 * dy]);
        targets.push(label);
    }
    Dataset::new(inputs, targets).expect("n > 0")
}

/// `y = bias + weights . x` on inputs uniform in `[-1, 1]^d`.
pub fn linear(n: usize, weights: &[f64], bias: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            weights
                .iter()
                .map(|_| rng.random_range(-1.0..1.0))
                .collect()
        })
        .collect();
    let targets = inputs
        .iter()
        .map(|x| bias + x.iter().zip(weights).map(|(a, b)| a * b).sum::<f64>())
        .collect();
    Dataset::new(inputs, targets).expect("n > 0 and weights non-empty")
}

/// `y = f(t)` on `n` evenly spaced points of `[lo, hi]`.
pub fn grid_1d(n: usize, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Dataset {
    let step = if n > 1 {
        (hi - lo) / (n - 1) as f64
    } else {
        0.0
    };
    let inputs: Vec<Vec<f64>> = (0..n).map(|i| vec![lo + step * i as f64]).collect();
    let targets = inputs.iter().map(|x| f(x[0])).collect();
    Dataset::new(inputs, targets).expect("n > 0")
}
