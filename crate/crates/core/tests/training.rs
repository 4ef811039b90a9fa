mod common;

use common::{random_theta, rel_err, rng};
use num_complex::Complex64;
use qridge::block::{BlockRidgeModel, SharedParam};
use qridge::dataset::{grid_1d, linear, two_blobs};
use qridge::explain::explain;
use qridge::fourier::FourierRidgeModel;
use qridge::model::{fd_gradient_of, CircuitModel, Model, ModelKind, Trainable};
use qridge::quantum::{first_qubit_zero_selector, hardware_efficient_ansatz, GateOp, ParamCircuit};
use qridge::training::{train, TargetTransform, TrainConfig};
use qridge::xnn::{Activation, XnnModel};
use qridge::Error;

fn zero_fourier(directions: Vec<Vec<f64>>) -> FourierRidgeModel {
    let k = directions.len();
    FourierRidgeModel::new(directions, vec![Complex64::new(0.0, 0.0); k]).unwrap()
}

#[test]
fn zero_learning_rate_keeps_loss_constant() {
    let data = two_blobs(30, 1);
    let model = BlockRidgeModel::random(2, 2, 1, &mut rng(1)).unwrap();
    let cfg = TrainConfig {
        learning_rate: 0.0,
        epochs: 20,
        ..Default::default()
    };
    let (trained, hist) = train(&model, &data, &cfg).unwrap();
    assert_eq!(trained, model);
    assert!(hist
        .losses
        .iter()
        .all(|l| l.to_bits() == hist.initial.to_bits()));
}

#[test]
fn cosine_grid_is_learned_by_two_frequencies() {
    let data = grid_1d(32, -std::f64::consts::PI, std::f64::consts::PI, f64::cos);
    let model = zero_fourier(vec![vec![1.0], vec![-1.0]]);
    let cfg = TrainConfig {
        learning_rate: 0.5,
        epochs: 500,
        ..Default::default()
    };
    let (_, hist) = train(&model, &data, &cfg).unwrap();
    assert!(hist.final_loss() < 1e-8, "final loss {}", hist.final_loss());
}

#[test]
fn divergence_reports_epoch() {
    let data = linear(20, &[3.0, -2.0], 1.0, 2);
    let model = XnnModel::new(0.0, vec![1.0], vec![vec![1.0, 1.0]], Activation::Identity).unwrap();
    let cfg = TrainConfig {
        learning_rate: 1e6,
        epochs: 200,
        ..Default::default()
    };
    match train(&model, &data, &cfg) {
        Err(Error::NanLoss(epoch)) => assert!(epoch >= 1),
        other => panic!("expected NanLoss, got {other:?}"),
    }
}

#[test]
fn negative_learning_rate_is_rejected() {
    let data = linear(5, &[1.0], 0.0, 3);
    let model = XnnModel::new(0.0, vec![], vec![], Activation::Identity).unwrap();
    let cfg = TrainConfig {
        learning_rate: -0.1,
        ..Default::default()
    };
    assert!(matches!(
        train(&model, &data, &cfg),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn model_gradients_match_finite_differences() {
    let mut r = rng(5);
    let x = [0.4, -0.9, 1.3];
    let circuit = hardware_efficient_ansatz(2, 2).unwrap();
    let cm = CircuitModel::new(
        circuit,
        random_theta(8, &mut r),
        first_qubit_zero_selector(2).unwrap(),
    )
    .unwrap();
    let bm = BlockRidgeModel::random(2, 3, 2, &mut r).unwrap();
    let fm = FourierRidgeModel::new(
        vec![vec![1.0, 0.5, -0.2], vec![-0.3, 0.8, 0.1]],
        vec![Complex64::new(0.2, -0.4), Complex64::new(-0.7, 0.1)],
    )
    .unwrap();
    let xm = XnnModel::new(
        0.1,
        vec![0.5, -1.2],
        vec![vec![0.3, 0.2, -0.5], vec![-0.6, 0.4, 0.9]],
        Activation::Sine,
    )
    .unwrap();
    let models: Vec<Model> = vec![cm.into(), bm.into(), fm.into(), xm.into()];
    for m in &models {
        let analytic = m.predict_gradient(&x, 1e-5).unwrap();
        let fd = fd_gradient_of(m, &x, 1e-5).unwrap();
        assert_eq!(analytic.len(), fd.len());
        for (a, b) in analytic.iter().zip(&fd) {
            assert!(rel_err(*a, *b) < 1e-5, "{}: {a} vs {b}", m.kind());
        }
    }
}

#[test]
fn tied_slot_gradient_is_sum_of_untied_gradients() {
    let x = [0.4, -0.9, 1.3];
    let bm = BlockRidgeModel::random(2, 3, 2, &mut rng(15)).unwrap();
    let mut params = bm.block_params().unwrap().to_vec();
    params[2][1] = params[0][1];
    let free = BlockRidgeModel::parameterized(4, params.clone()).unwrap();
    let tie = SharedParam {
        block: 0,
        slot: 1,
        with_block: 2,
        with_slot: 1,
    };
    let tied = BlockRidgeModel::parameterized_with_ties(4, params, vec![tie]).unwrap();
    let n = free.block_params().unwrap()[0].len();
    let g_free = free.predict_gradient(&x, 1e-5).unwrap();
    let g_tied = tied.predict_gradient(&x, 1e-5).unwrap();
    let expected = g_free[1] + g_free[2 * n + 1];
    assert!(
        rel_err(g_tied[1], expected) < 1e-5,
        "{} vs {expected}",
        g_tied[1]
    );
    assert!(rel_err(g_tied[2 * n + 1], expected) < 1e-5);
    assert!(rel_err(g_tied[0], g_free[0]) < 1e-5);
}

#[test]
fn shared_circuit_slots_fall_back_to_finite_differences() {
    let circuit = ParamCircuit::new(1, 1, vec![GateOp::ry(0, 0), GateOp::ry(0, 0)]).unwrap();
    let m = CircuitModel::new(circuit, vec![0.3], first_qubit_zero_selector(1).unwrap()).unwrap();
    // RY(0.3)RY(0.3) = RY(0.6), so P(0) = cos^2(0.3) for |0>, derivative -sin(0.6)
    let g = m.predict_gradient(&[1.0, 0.0], 1e-6).unwrap();
    assert!((g[0] + 0.6f64.sin()).abs() < 1e-6);
}

#[test]
fn models_round_trip_through_json() {
    let mut r = rng(6);
    let bm = BlockRidgeModel::random(2, 4, 2, &mut r).unwrap();
    let circuit = hardware_efficient_ansatz(2, 1).unwrap();
    let cm = CircuitModel::new(
        circuit,
        random_theta(4, &mut r),
        first_qubit_zero_selector(2).unwrap(),
    )
    .unwrap();
    let fm = zero_fourier(vec![vec![0.5, 1.0]]);
    let xm = XnnModel::new(0.5, vec![1.0], vec![vec![0.1, 0.2]], Activation::Sigmoid).unwrap();
    for m in [Model::from(bm), cm.into(), fm.into(), xm.into()] {
        let back = Model::from_json(m.kind(), &m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), m.to_json());
    }
}

#[test]
fn trained_model_reproduces_final_loss() {
    let data = two_blobs(40, 7);
    let scaled = TargetTransform::fit(&data).apply_dataset(&data).unwrap();
    let bm = BlockRidgeModel::random(2, 2, 1, &mut rng(7)).unwrap();
    let cfg = TrainConfig {
        learning_rate: 0.5,
        epochs: 30,
        ..Default::default()
    };
    let (trained, hist) = train(&bm, &scaled, &cfg).unwrap();
    let reloaded = Model::from_json(ModelKind::Block, &Model::from(trained).to_json()).unwrap();
    let preds: Vec<f64> = scaled
        .inputs()
        .iter()
        .map(|x| reloaded.predict(x).unwrap())
        .collect();
    let loss = qridge::training::mse_loss(&preds, scaled.targets()).unwrap();
    assert!((loss - hist.final_loss()).abs() < 1e-10);
}

#[test]
fn explain_reports_hold_invariants() {
    let mut r = rng(8);
    let x = [0.7, -0.2];
    let bm = BlockRidgeModel::random(1, 2, 3, &mut r).unwrap();
    let rep = explain(&bm, &x, "probe", 1e-5).unwrap();
    assert!(rep.check().ok());
    assert_eq!(rep.n_terms, 2);
    // each parameter only moves the term of its own block
    let blocks = rep.param_blocks.clone().unwrap();
    for (term, row) in rep.sensitivity.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if blocks[j] != term {
                assert_eq!(*v, 0.0);
            }
        }
    }
    let xm = XnnModel::new(
        0.3,
        vec![1.0, 2.0],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        Activation::Tanh,
    )
    .unwrap();
    let rep = explain(&xm, &x, "probe", 1e-5).unwrap();
    assert!(rep.check().ok());
    assert!((rep.offset - 0.3).abs() < 1e-15);
}
