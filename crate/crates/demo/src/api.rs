use std::f64::consts::PI;

use qridge::block::BlockRidgeModel;
use qridge::dataset::grid_1d;
use qridge::fourier::{fit_least_squares, model_eval};
use qridge::quantum::{
    circuit_unitary, first_qubit_zero_selector, hardware_efficient_ansatz, StateVector,
};
use qridge::ridge::{extract_rows, term_contributions, verify_equivalence, EquivalenceReport};
use qridge::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const LOCALITY_QUBITS: usize = 3;
const LOCALITY_TERMS: usize = 4;
const LOCALITY_LAYERS: usize = 2;

#[derive(Serialize)]
struct Terms {
    before: Vec<f64>,
    after: Vec<f64>,
}

#[derive(Serialize)]
struct LocalityView {
    term: usize,
    shift: f64,
    circuit: Terms,
    block: Terms,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("demo payloads serialize")
}

fn random_angles(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-PI..PI)).collect()
}

pub fn locality(seed: u64, term: usize, shift: f64) -> Result<String> {
    if term >= LOCALITY_TERMS {
        return Err(Error::IndexOutOfRange {
            index: term,
            len: LOCALITY_TERMS,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = StateVector::random(LOCALITY_QUBITS, &mut rng);

    // In the circuit every row depends on every angle; shift the first RY of qubit `term % n`.
    let circuit = hardware_efficient_ansatz(LOCALITY_QUBITS, LOCALITY_LAYERS)?;
    let selector = first_qubit_zero_selector(LOCALITY_QUBITS)?;
    let mut theta = random_angles(circuit.n_params(), &mut rng);
    let circuit_terms = |theta: &[f64]| -> Result<Vec<f64>> {
        term_contributions(
            &extract_rows(&circuit_unitary(&circuit, theta)?, &selector)?,
            &x,
        )
    };
    let circuit_before = circuit_terms(&theta)?;
    theta[2 * (term % LOCALITY_QUBITS)] += shift;
    let circuit_after = circuit_terms(&theta)?;

    let model =
        BlockRidgeModel::random(LOCALITY_QUBITS, LOCALITY_TERMS, LOCALITY_LAYERS, &mut rng)?;
    let n_params = 2 * LOCALITY_QUBITS * LOCALITY_LAYERS;
    let perturbed = qridge::block::perturb_block(&model, term, &vec![shift; n_params])?;

    Ok(json(&LocalityView {
        term,
        shift,
        circuit: Terms {
            before: circuit_before,
            after: circuit_after,
        },
        block: Terms {
            before: model.term_contributions(&x)?,
            after: perturbed.term_contributions(&x)?,
        },
    }))
}

#[derive(Serialize)]
struct FitView {
    xs: Vec<f64>,
    target: Vec<f64>,
    fit: Vec<f64>,
    frequencies: Vec<f64>,
    coefficients: Vec<[f64; 2]>,
    residual: f64,
    rank: usize,
}

fn target_fn(name: &str) -> Result<fn(f64) -> f64> {
    Ok(match name {
        "square" => |x: f64| if x.sin() >= 0.0 { 1.0 } else { -1.0 },
        "sawtooth" => |x: f64| x / PI,
        "triangle" => |x: f64| 1.0 - 2.0 * x.abs() / PI,
        "cos" => f64::cos,
        other => return Err(Error::InvalidConfig(format!("unknown target '{other}'"))),
    })
}

pub fn fourier_fit(target: &str, max_frequency: usize, n_points: usize) -> Result<String> {
    let f = target_fn(target)?;
    if n_points < 2 {
        return Err(Error::InvalidConfig(
            "need at least two sample points".into(),
        ));
    }
    let data = grid_1d(n_points, -PI, PI, f);
    let frequencies: Vec<f64> = (-(max_frequency as i64)..=max_frequency as i64)
        .map(|k| k as f64)
        .collect();
    let directions: Vec<Vec<f64>> = frequencies.iter().map(|&k| vec![k]).collect();
    let (model, report) = fit_least_squares(&directions, &data)?;
    let xs: Vec<f64> = (0..=400)
        .map(|i| -PI + 2.0 * PI * i as f64 / 400.0)
        .collect();
    let fit = xs
        .iter()
        .map(|&x| model_eval(&model, &[x]))
        .collect::<Result<Vec<_>>>()?;
    Ok(json(&FitView {
        target: xs.iter().map(|&x| f(x)).collect(),
        xs,
        fit,
        frequencies,
        coefficients: model.coefficients().iter().map(|c| [c.re, c.im]).collect(),
        residual: report.residual,
        rank: report.rank,
    }))
}

#[derive(Serialize)]
struct EquivalenceView {
    #[serde(flatten)]
    report: EquivalenceReport,
    contributions: Vec<f64>,
}

pub fn equivalence(n_qubits: usize, layers: usize, seed: u64) -> Result<String> {
    if !(1..=8).contains(&n_qubits) {
        return Err(Error::InvalidConfig(format!(
            "n_qubits must be in 1..=8, got {n_qubits}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circuit = hardware_efficient_ansatz(n_qubits, layers)?;
    let theta = random_angles(circuit.n_params(), &mut rng);
    let selector = first_qubit_zero_selector(n_qubits)?;
    let x = StateVector::random(n_qubits, &mut rng);
    let report = verify_equivalence(&circuit, &theta, &selector, &x, 1e-10)?;
    let contributions = term_contributions(
        &extract_rows(&circuit_unitary(&circuit, &theta)?, &selector)?,
        &x,
    )?;
    Ok(json(&EquivalenceView {
        report,
        contributions,
    }))
}
