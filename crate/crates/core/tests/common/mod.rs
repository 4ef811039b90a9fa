#![allow(dead_code)]

use num_complex::Complex64;
use qridge::quantum::{
    hardware_efficient_ansatz, random_circuit, MeasurementSelector, ParamCircuit,
};
use rand::seq::index::sample;
use rand::Rng;

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_theta<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect()
}

/// Hardware-efficient ansatz half the time, mixed-gate random circuit otherwise.
pub fn random_ansatz<R: Rng>(n_qubits: usize, rng: &mut R) -> ParamCircuit {
    let layers = rng.random_range(1..=4);
    if rng.random_bool(0.5) {
        hardware_efficient_ansatz(n_qubits, layers).unwrap()
    } else {
        random_circuit(n_qubits, layers, rng).unwrap()
    }
}

pub fn random_selector<R: Rng>(dim: usize, rng: &mut R) -> MeasurementSelector {
    let size = rng.random_range(1..=dim);
    MeasurementSelector::new(sample(rng, dim, size).into_vec(), dim).unwrap()
}

/// `|a - b| / max(|a|, |b|, 1e-3)`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-3)
}

/// Kronecker-product simulator used as an oracle: every gate is expanded to a
/// full `2^n x 2^n` matrix from its 2x2 / 4x4 definition, with no bit tricks
/// shared with the library.
pub mod oracle {
    use super::*;
    use qridge::quantum::{GateKind, GateOp};

    pub type Mat = Vec<Vec<Complex64>>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn eye(n: usize) -> Mat {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect()
    }

    pub fn kron(a: &Mat, b: &Mat) -> Mat {
        let (ra, rb) = (a.len(), b.len());
        let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
        for i in 0..ra {
            for j in 0..ra {
                for k in 0..rb {
                    for l in 0..rb {
                        out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    pub fn matmul(a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    pub fn matvec(a: &Mat, x: &[Complex64]) -> Vec<Complex64> {
        a.iter()
            .map(|row| row.iter().zip(x).map(|(m, v)| m * v).sum())
            .collect()
    }

    fn one_qubit(kind: GateKind, phi: f64) -> Mat {
        let (s, co) = (phi / 2.0).sin_cos();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match kind {
            GateKind::RX => vec![vec![c(co, 0.0), c(0.0, -s)], vec![c(0.0, -s), c(co, 0.0)]],
            GateKind::RY => vec![vec![c(co, 0.0), c(-s, 0.0)], vec![c(s, 0.0), c(co, 0.0)]],
            GateKind::RZ => vec![vec![c(co, -s), c(0.0, 0.0)], vec![c(0.0, 0.0), c(co, s)]],
            GateKind::H => vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]],
            _ => unreachable!(),
        }
    }

    fn embed_one(n: usize, q: usize, g: &Mat) -> Mat {
        // qubit 0 is the leftmost Kronecker factor
        let mut m = if q == 0 { g.clone() } else { eye(2) };
        for k in 1..n {
            m = kron(&m, &if k == q { g.clone() } else { eye(2) });
        }
        m
    }

    fn projector(bit: usize) -> Mat {
        let mut p = vec![vec![c(0.0, 0.0); 2]; 2];
        p[bit][bit] = c(1.0, 0.0);
        p
    }

    fn add(a: &Mat, b: &Mat) -> Mat {
        a.iter()
            .zip(b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
            .collect()
    }

    pub fn gate_matrix(n: usize, g: &GateOp, theta: &[f64]) -> Mat {
        match g.kind {
            GateKind::CNOT | GateKind::CZ => {
                let (a, b) = (g.targets[0], g.targets[1]);
                let x = vec![
                    vec![c(0.0, 0.0), c(1.0, 0.0)],
                    vec![c(1.0, 0.0), c(0.0, 0.0)],
                ];
                let z = vec![
                    vec![c(1.0, 0.0), c(0.0, 0.0)],
                    vec![c(0.0, 0.0), c(-1.0, 0.0)],
                ];
                let u = if g.kind == GateKind::CNOT { x } else { z };
                // |0><0|_a (x) I + |1><1|_a (x) U_b
                let p0 = embed_one(n, a, &projector(0));
                let p1 = matmul(&embed_one(n, a, &projector(1)), &embed_one(n, b, &u));
                add(&p0, &p1)
            }
            kind => embed_one(
                n,
                g.targets[0],
                &one_qubit(kind, g.param_index.map_or(0.0, |p| theta[p])),
            ),
        }
    }

    pub fn circuit_matrix(circuit: &ParamCircuit, theta: &[f64]) -> Mat {
        let n = circuit.n_qubits();
        circuit.gates().iter().fold(eye(1 << n), |acc, g| {
            matmul(&gate_matrix(n, g, theta), &acc)
        })
    }
}
