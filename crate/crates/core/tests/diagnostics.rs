mod common;

use hive_vqe::diagnostics::{
    distance_consistency_residual, fubini_study_distance, hessian, hessian_from_gradient, qfim,
    qfim_rank, spectrum_report, SymMatrix, HESSIAN_STEP,
};
use hive_vqe::pauli::TfimSpec;
use hive_vqe::statevector::StateVector;
use hive_vqe::{build_tfim, Boundary, HvaCircuit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plus(n: usize) -> StateVector<f64> {
    StateVector::plus_state(n).unwrap()
}

fn random_direction(len: usize, norm: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
    let scale = norm / v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x * scale).collect()
}

/// QFIM from central-difference state derivatives.
fn fd_qfim(circuit: &HvaCircuit, theta: &[f64], step: f64) -> SymMatrix<f64> {
    let m = theta.len();
    let psi = circuit.prepare_state(theta).unwrap();
    let derivs: Vec<Vec<num_complex::Complex64>> = (0..m)
        .map(|i| {
            let mut a = theta.to_vec();
            let mut b = theta.to_vec();
            a[i] += step;
            b[i] -= step;
            let pa = circuit.prepare_state(&a).unwrap();
            let pb = circuit.prepare_state(&b).unwrap();
            pa.amplitudes()
                .iter()
                .zip(pb.amplitudes())
                .map(|(x, y)| (x - y) / (2.0 * step))
                .collect()
        })
        .collect();
    let dot = |a: &[num_complex::Complex64], b: &[num_complex::Complex64]| {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<num_complex::Complex64>()
    };
    let overlaps: Vec<_> = derivs.iter().map(|d| dot(d, psi.amplitudes())).collect();
    let mut data = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            data[i * m + j] = 4.0 * (dot(&derivs[i], &derivs[j]) - overlaps[i] * overlaps[j].conj()).re;
        }
    }
    SymMatrix::from_row_major(m, data).unwrap().symmetrized()
}

#[test]
fn quadratic_distance_consistency_on_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (n, layers) in common::GRID {
        let circuit = HvaCircuit::new(n, layers, Boundary::Closed).unwrap();
        let base = plus(n);
        for point in 0..3 {
            let theta = common::seeded_theta(2 * layers, 50 + point);
            let f = qfim(&circuit, &theta, &base).unwrap();
            for _ in 0..10 {
                let delta = random_direction(theta.len(), 1e-3, &mut rng);
                let r = distance_consistency_residual(&circuit, &base, &f, &delta).unwrap();
                assert!(r <= 1e-7, "({n},{layers}) point {point}: residual {r:e}");
            }
        }
    }
}

#[test]
fn qfim_is_symmetric_and_psd() {
    for (n, layers) in [(4, 4), (6, 10)] {
        let circuit = HvaCircuit::new(n, layers, Boundary::Closed).unwrap();
        let f = qfim(&circuit, &common::seeded_theta(2 * layers, 8), &plus(n)).unwrap();
        assert!(f.matrix.max_asymmetry() <= 1e-9);
        assert!(f.matrix.eigen().values[0] >= -1e-8);
    }
}

#[test]
fn qfim_ignores_global_phase() {
    let circuit = HvaCircuit::new(4, 4, Boundary::Closed).unwrap();
    let theta = common::seeded_theta(8, 19);
    let f = qfim(&circuit, &theta, &plus(4)).unwrap();
    for phi in [0.3, 1.9, -2.7] {
        let g = qfim(&circuit, &theta, &plus(4).with_global_phase(phi)).unwrap();
        for (a, b) in f.matrix.as_slice().iter().zip(g.matrix.as_slice()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn qfim_rank_respects_state_space_dimension() {
    for (n, layers) in [(2, 4), (3, 6), (4, 4), (4, 8)] {
        let circuit = HvaCircuit::new(n, layers, Boundary::Closed).unwrap();
        let f = qfim(&circuit, &common::seeded_theta(2 * layers, 23), &plus(n)).unwrap();
        let bound = (2 * layers).min((1usize << (n + 1)) - 2);
        assert!(qfim_rank(&f) <= bound);
    }
}

#[test]
fn qfim_rank_matches_finite_difference_rank() {
    for (n, layers) in [(4, 4), (4, 8), (6, 10)] {
        let circuit = HvaCircuit::new(n, layers, Boundary::Closed).unwrap();
        for seed in 0..3 {
            let theta = common::seeded_theta(2 * layers, 300 + seed);
            let f = qfim(&circuit, &theta, &plus(n)).unwrap();
            let oracle = spectrum_report(&fd_qfim(&circuit, &theta, 1e-5), 1e-7).unwrap();
            assert_eq!(qfim_rank(&f), oracle.rank, "({n},{layers}) seed {seed}");
        }
    }
}

#[test]
fn fubini_study_distance_basics() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a: StateVector<f64> = StateVector::random(4, &mut rng).unwrap();
    assert!(fubini_study_distance(&a, &a).unwrap().abs() <= 1e-15);
    assert!(fubini_study_distance(&a, &a.clone().with_global_phase(1.234)).unwrap() <= 1e-15);
    let z: StateVector<f64> = StateVector::basis_state(4, 0).unwrap();
    let o = StateVector::basis_state(4, 5).unwrap();
    assert_eq!(fubini_study_distance(&z, &o).unwrap(), 1.0);
    assert!(fubini_study_distance(&z, &StateVector::basis_state(3, 0).unwrap()).is_err());
}

#[test]
fn hessian_recovers_planted_quadratic() {
    let m = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut a = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let v = rng.random_range(-2.0..2.0);
            a[i * m + j] = v;
            a[j * m + i] = v;
        }
    }
    let grad = |x: &[f64]| -> hive_vqe::Result<Vec<f64>> {
        Ok((0..m).map(|i| 2.0 * (0..m).map(|j| a[i * m + j] * x[j]).sum::<f64>()).collect())
    };
    let x0: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let hess = hessian_from_gradient(grad, &x0, HESSIAN_STEP).unwrap();
    for i in 0..m {
        for j in 0..m {
            assert!((hess.matrix.get(i, j) - 2.0 * a[i * m + j]).abs() <= 1e-6);
        }
    }
}

fn double_fd(energy: impl Fn(&[f64]) -> f64, theta: &[f64], h: f64) -> Vec<f64> {
    let m = theta.len();
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let at = |si: f64, sj: f64| {
                let mut t = theta.to_vec();
                t[i] += si * h;
                t[j] += sj * h;
                energy(&t)
            };
            out[i * m + j] = (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * h * h);
        }
    }
    out
}

#[test]
fn vqe_hessian_matches_double_finite_differences() {
    let h = build_tfim(&TfimSpec::new(4, 1.1, Boundary::Closed).unwrap());
    let circuit = HvaCircuit::new(4, 4, Boundary::Closed).unwrap();
    let energy = |t: &[f64]| circuit.prepare_state(t).unwrap().expectation(&h).unwrap();
    for theta in [vec![0.0; 8], common::seeded_theta(8, 41)] {
        let hess = hessian(&circuit, &theta, &h, HESSIAN_STEP).unwrap();
        let oracle = double_fd(energy, &theta, 1e-4);
        for (k, (a, b)) in hess.matrix.as_slice().iter().zip(&oracle).enumerate() {
            assert!((a - b).abs() <= 1e-4, "entry {k}: {a} vs {b}");
        }
    }
}

#[test]
fn vqe_hessian_is_nearly_symmetric_before_symmetrizing() {
    let h = build_tfim(&TfimSpec::new(6, 1.1, Boundary::Closed).unwrap());
    let circuit = HvaCircuit::new(6, 10, Boundary::Closed).unwrap();
    for seed in 0..3 {
        let theta = common::seeded_theta(20, 60 + seed);
        let hess = hessian(&circuit, &theta, &h, HESSIAN_STEP).unwrap();
        assert!(hess.raw_asymmetry <= 1e-5, "seed {seed}: {:e}", hess.raw_asymmetry);
    }
}

#[test]
fn spectrum_of_single_layer_qfim_at_zero() {
    let circuit = HvaCircuit::new(4, 1, Boundary::Closed).unwrap();
    let f = qfim(&circuit, &[0.0, 0.0], &plus(4)).unwrap();
    let report = spectrum_report(&f.matrix, f.rank_tolerance).unwrap();
    assert_eq!((report.rank, report.zero_count), (1, 1));
    assert!((report.eigenvalues[1] - 16.0).abs() <= 1e-12);
}
