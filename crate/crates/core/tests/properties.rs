mod common;

use common::{random_ansatz, random_selector, random_theta, rel_err, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use qridge::block::{block_output, complete_unitary, perturb_block, BlockRidgeModel};
use qridge::dataset::Dataset;
use qridge::fourier::{fit_least_squares, model_eval, FourierRidgeModel};
use qridge::quantum::{
    circuit_unitary, run_circuit, selector_expectation, GateOp, MeasurementSelector, ParamCircuit,
    StateVector,
};
use qridge::ridge::{extract_rows, ridge_eval, term_contributions, verify_equivalence};
use qridge::training::{
    encode_input, finite_diff_gradient, locality_experiment, parameter_shift_gradient,
};
use qridge::xnn::{xnn_eval, Activation, XnnModel};
use rand::Rng;

fn cfg() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

/// Runs `a` then `b` as one circuit, with `b`'s slots shifted past `a`'s.
fn concat(a: &ParamCircuit, b: &ParamCircuit) -> ParamCircuit {
    let offset = a.n_params();
    let mut gates = a.gates().to_vec();
    gates.extend(b.gates().iter().map(|g| GateOp {
        param_index: g.param_index.map(|p| p + offset),
        ..g.clone()
    }));
    ParamCircuit::new(a.n_qubits(), offset + b.n_params(), gates).unwrap()
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn circuits_preserve_norm(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let c = random_ansatz(n, &mut r);
        let x = StateVector::random(n, &mut r);
        let out = run_circuit(&c, &random_theta(c.n_params(), &mut r), &x).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_unitaries_are_unitary(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let c = random_ansatz(n, &mut r);
        let u = circuit_unitary(&c, &random_theta(c.n_params(), &mut r)).unwrap();
        prop_assert!(u.unitarity_defect() < 1e-12);
    }

    #[test]
    fn composition_multiplies_unitaries(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let (a, b) = (random_ansatz(n, &mut r), random_ansatz(n, &mut r));
        let (ta, tb) = (random_theta(a.n_params(), &mut r), random_theta(b.n_params(), &mut r));
        let joint = circuit_unitary(&concat(&a, &b), &[ta.clone(), tb.clone()].concat()).unwrap();
        let (ua, ub) = (circuit_unitary(&a, &ta).unwrap(), circuit_unitary(&b, &tb).unwrap());
        let dim = 1 << n;
        for i in 0..dim {
            for j in 0..dim {
                let prod: Complex64 = (0..dim).map(|k| ub.get(i, k) * ua.get(k, j)).sum();
                prop_assert!((prod - joint.get(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn full_selector_measures_one(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let c = random_ansatz(n, &mut r);
        let theta = random_theta(c.n_params(), &mut r);
        let x = StateVector::random(n, &mut r);
        let full = MeasurementSelector::full(1 << n).unwrap();
        prop_assert!((selector_expectation(&c.run(&theta, &x).unwrap(), &full).unwrap() - 1.0).abs() < 1e-12);
        let d = extract_rows(&circuit_unitary(&c, &theta).unwrap(), &full).unwrap();
        prop_assert!((ridge_eval(&d, &x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn direct_equals_ridge(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let c = random_ansatz(n, &mut r);
        let sel = random_selector(1 << n, &mut r);
        let x = StateVector::random(n, &mut r);
        let rep = verify_equivalence(&c, &random_theta(c.n_params(), &mut r), &sel, &x, 1e-10).unwrap();
        prop_assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn contributions_sum_exactly(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let c = random_ansatz(n, &mut r);
        let sel = random_selector(1 << n, &mut r);
        let d = extract_rows(&circuit_unitary(&c, &random_theta(c.n_params(), &mut r)).unwrap(), &sel).unwrap();
        let x = StateVector::random(n, &mut r);
        let terms = term_contributions(&d, &x).unwrap();
        prop_assert_eq!(terms.len(), sel.len());
        prop_assert!(terms.iter().all(|t| *t >= 0.0));
        let sum = terms.iter().fold(0.0, |a, t| a + t);
        prop_assert_eq!(sum.to_bits(), ridge_eval(&d, &x).unwrap().to_bits());
    }

    #[test]
    fn extracted_rows_are_orthonormal(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let c = random_ansatz(n, &mut r);
        let sel = random_selector(1 << n, &mut r);
        let d = extract_rows(&circuit_unitary(&c, &random_theta(c.n_params(), &mut r)).unwrap(), &sel).unwrap();
        prop_assert!(d.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn completion_embeds_row(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let w = StateVector::random(n, &mut r).into_amplitudes();
        let v = complete_unitary(&w).unwrap();
        prop_assert!(v.unitarity_defect() < 1e-12);
        for (a, b) in v.row(0).iter().zip(&w) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn block_model_matches_ridge(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let c = random_ansatz(n, &mut r);
        let sel = random_selector(1 << n, &mut r);
        let d = extract_rows(&circuit_unitary(&c, &random_theta(c.n_params(), &mut r)).unwrap(), &sel).unwrap();
        let model = BlockRidgeModel::from_rows(d.directions()).unwrap();
        let x = StateVector::random(n, &mut r);
        prop_assert!((block_output(&model, &x).unwrap() - ridge_eval(&d, &x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn perturbations_stay_local(seed in any::<u64>(), n in 1usize..=3, layers in 1usize..=3) {
        let mut r = rng(seed);
        let k = r.random_range(1..=(1usize << n));
        let model = BlockRidgeModel::random(n, k, layers, &mut r).unwrap();
        let x = StateVector::random(n, &mut r);
        let b = r.random_range(0..k);
        let delta: Vec<f64> = (0..2 * n * layers).map(|_| r.random_range(-1.0..1.0)).collect();
        let rep = locality_experiment(&model, &x, b, &delta).unwrap();
        prop_assert!(rep.off_block_unchanged);
        let p = perturb_block(&model, b, &delta).unwrap();
        for j in (0..k).filter(|&j| j != b) {
            prop_assert_eq!(&p.rows()[j], &model.rows()[j]);
        }
    }

    #[test]
    fn fourier_conjugate_pair_doubles_term(seed in any::<u64>(), d in 1usize..=4) {
        let mut r = rng(seed);
        let w: Vec<f64> = (0..d).map(|_| r.random_range(-2.0..2.0)).collect();
        let neg: Vec<f64> = w.iter().map(|v| -v).collect();
        let c = Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let paired = FourierRidgeModel::new(vec![w.clone(), neg], vec![c, c.conj()]).unwrap();
        let single = FourierRidgeModel::new(vec![w], vec![2.0 * c]).unwrap();
        let x: Vec<f64> = (0..d).map(|_| r.random_range(-3.0..3.0)).collect();
        prop_assert!((model_eval(&paired, &x).unwrap() - model_eval(&single, &x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn more_directions_never_fit_worse(seed in any::<u64>(), k in 1usize..=5) {
        let mut r = rng(seed);
        let inputs: Vec<Vec<f64>> = (0..40).map(|_| vec![r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)]).collect();
        let targets = inputs.iter().map(|x| (x[0] * x[1]).sin() + 0.3 * x[0]).collect();
        let data = Dataset::new(inputs, targets).unwrap();
        let dirs: Vec<Vec<f64>> = (0..k + 3).map(|_| vec![r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)]).collect();
        let (_, small) = fit_least_squares(&dirs[..k], &data).unwrap();
        let (_, large) = fit_least_squares(&dirs, &data).unwrap();
        prop_assert!(large.residual <= small.residual + 1e-12);
    }

    #[test]
    fn representable_targets_fit_exactly(seed in any::<u64>(), k in 1usize..=6, dup in any::<bool>()) {
        let mut r = rng(seed);
        let mut dirs: Vec<Vec<f64>> = (0..k).map(|_| vec![r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)]).collect();
        if dup {
            dirs.push(dirs[0].iter().map(|v| -v).collect());
            dirs.push(vec![0.0, 0.0]);
        }
        let coeffs = (0..dirs.len()).map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
        let truth = FourierRidgeModel::new(dirs.clone(), coeffs).unwrap();
        let inputs: Vec<Vec<f64>> = (0..60).map(|_| vec![r.random_range(-3.0..3.0), r.random_range(-3.0..3.0)]).collect();
        let targets = inputs.iter().map(|x| model_eval(&truth, x).unwrap()).collect();
        let (_, rep) = fit_least_squares(&dirs, &Dataset::new(inputs, targets).unwrap()).unwrap();
        prop_assert!(rep.residual < 1e-10, "{rep:?}");
    }

    #[test]
    fn xnn_is_linear_in_gammas(seed in any::<u64>(), k in 0usize..=4, scale in -3.0f64..3.0) {
        let mut r = rng(seed);
        let d = 3;
        let gammas: Vec<f64> = (0..k).map(|_| r.random_range(-2.0..2.0)).collect();
        let dirs: Vec<Vec<f64>> = (0..k).map(|_| (0..d).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
        let mu = r.random_range(-1.0..1.0);
        let base = XnnModel::new(mu, gammas.clone(), dirs.clone(), Activation::Tanh).unwrap();
        let scaled = XnnModel::new(mu, gammas.iter().map(|g| g * scale).collect(), dirs, Activation::Tanh).unwrap();
        let x: Vec<f64> = (0..d).map(|_| r.random_range(-2.0..2.0)).collect();
        let lhs = xnn_eval(&scaled, &x).unwrap() - mu;
        let rhs = scale * (xnn_eval(&base, &x).unwrap() - mu);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn encoding_is_unit_and_zero_padded(x in prop::collection::vec(-5.0f64..5.0, 1..=8), extra in 0usize..=2) {
        prop_assume!(x.iter().any(|v| v.abs() > 1e-6));
        let n = (x.len().next_power_of_two().trailing_zeros() as usize).max(1) + extra;
        let e = encode_input(&x, n).unwrap();
        prop_assert!((e.state.norm() - 1.0).abs() < 1e-12);
        let amps = e.state.amplitudes();
        prop_assert!(amps[x.len()..].iter().all(|a| a.re == 0.0 && a.im == 0.0));
        for (a, v) in amps.iter().zip(&x) {
            prop_assert!((a.re * e.original_norm - v).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_rule_matches_finite_differences(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let c = random_ansatz(n, &mut r);
        let theta = random_theta(c.n_params(), &mut r);
        let sel = random_selector(1 << n, &mut r);
        let x = StateVector::random(n, &mut r);
        let shift = parameter_shift_gradient(&c, &theta, &sel, &x).unwrap();
        let fd = finite_diff_gradient(|t| selector_expectation(&c.run(t, &x).unwrap(), &sel).unwrap(), &theta, 1e-5);
        for (a, b) in shift.iter().zip(&fd) {
            prop_assert!(rel_err(*a, *b) < 1e-5, "{a} vs {b}");
        }
    }
}
