use std::path::Path;

use anyhow::{ensure, Context, Result};
use qridge::quantum::{first_qubit_zero_selector, MeasurementSelector, ParamCircuit, StateVector};
use qridge::ridge::{verify_equivalence, EquivalenceReport};
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::commands::rng;
use crate::io::{emit, read_text, to_json};
use crate::{Common, Status};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Serialize)]
struct Trial {
    trial: usize,
    theta: Vec<f64>,
    #[serde(flatten)]
    report: EquivalenceReport,
}

#[derive(Serialize)]
struct VerifyReport {
    n_qubits: usize,
    n_params: usize,
    n_gates: usize,
    trials: usize,
    seed: u64,
    tol: f64,
    passed: usize,
    failed: usize,
    max_abs_diff: f64,
    mean_abs_diff: f64,
    pass: bool,
    results: Vec<Trial>,
}

/// Even trials measure "first qubit in |0>", odd trials a random nonempty subset.
fn trial_selector<R: Rng>(trial: usize, n_qubits: usize, r: &mut R) -> Result<MeasurementSelector> {
    let dim = 1usize << n_qubits;
    if trial.is_multiple_of(2) {
        return Ok(first_qubit_zero_selector(n_qubits)?);
    }
    let size = r.random_range(1..=dim);
    Ok(MeasurementSelector::new(
        sample(r, dim, size).into_vec(),
        dim,
    )?)
}

pub fn run(common: &Common, path: &Path, trials: usize) -> Result<Status> {
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    ensure!(tol >= 0.0, "--tol must be non-negative");
    ensure!(trials > 0, "--trials must be positive");
    let seed = common.seed.unwrap_or(0);
    let circuit: ParamCircuit = serde_json::from_str(&read_text(path)?)
        .with_context(|| format!("invalid circuit {}", path.display()))?;
    let n = circuit.n_qubits();
    ensure!(n >= 1, "circuit needs at least one qubit");

    let mut r = rng(seed);
    let pi = std::f64::consts::PI;
    let mut results = Vec::with_capacity(trials);
    for trial in 0..trials {
        let theta: Vec<f64> = (0..circuit.n_params())
            .map(|_| r.random_range(-pi..pi))
            .collect();
        let selector = trial_selector(trial, n, &mut r)?;
        let x = StateVector::random(n, &mut r);
        let report = verify_equivalence(&circuit, &theta, &selector, &x, tol)?;
        results.push(Trial {
            trial,
            theta,
            report,
        });
    }

    let passed = results.iter().filter(|t| t.report.pass).count();
    let max_abs_diff = results
        .iter()
        .map(|t| t.report.abs_diff)
        .fold(0.0, f64::max);
    let mean_abs_diff = results.iter().map(|t| t.report.abs_diff).sum::<f64>() / trials as f64;
    let report = VerifyReport {
        n_qubits: n,
        n_params: circuit.n_params(),
        n_gates: circuit.gates().len(),
        trials,
        seed,
        tol,
        passed,
        failed: trials - passed,
        max_abs_diff,
        mean_abs_diff,
        pass: passed == trials,
        results,
    };
    eprintln!(
        "verify: {passed}/{trials} trials within tol {tol:e}; max |direct - ridge| = {max_abs_diff:e}"
    );
    emit(common.out.as_deref(), &to_json(&report))?;
    Ok(if report.pass {
        Status::Pass
    } else {
        Status::Fail
    })
}
