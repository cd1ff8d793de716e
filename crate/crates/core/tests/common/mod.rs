//! Dense reference implementations built from explicit Kronecker products.
//! Nothing here goes through the crate's Pauli or statevector code.

#![allow(dead_code)]

use hive_vqe::Boundary;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub fn pauli_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_z() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// `op` on each listed qubit, identity elsewhere; qubit 0 is the leftmost factor.
pub fn embed(n: usize, ops: &[(usize, DMatrix<f64>)]) -> DMatrix<f64> {
    let mut out = DMatrix::from_element(1, 1, 1.0);
    for q in 0..n {
        let factor = ops
            .iter()
            .find(|(site, _)| *site == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| DMatrix::identity(2, 2));
        out = out.kronecker(&factor);
    }
    out
}

/// Chain bonds; a closed chain of two qubits carries the wraparound bond twice.
pub fn bonds(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut v: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Closed {
        v.push((n - 1, 0));
    }
    v
}

pub fn zz_sum(n: usize, boundary: Boundary) -> DMatrix<f64> {
    let dim = 1 << n;
    bonds(n, boundary)
        .into_iter()
        .fold(DMatrix::zeros(dim, dim), |acc, (i, j)| {
            acc + embed(n, &[(i, pauli_z()), (j, pauli_z())])
        })
}

pub fn x_sum(n: usize) -> DMatrix<f64> {
    let dim = 1 << n;
    (0..n).fold(DMatrix::zeros(dim, dim), |acc, i| acc + embed(n, &[(i, pauli_x())]))
}

/// `-sum ZZ - h sum X`.
pub fn tfim(n: usize, h: f64, boundary: Boundary) -> DMatrix<f64> {
    -zz_sum(n, boundary) - x_sum(n) * h
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// `exp(-i angle G)` for real symmetric `G`, by eigendecomposition.
pub fn exp_minus_i(g: &DMatrix<f64>, angle: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(g.clone());
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        g.nrows(),
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -angle * l)),
    ));
    &v * phases * v.transpose()
}

pub fn plus_state(n: usize) -> DVector<Complex64> {
    let dim = 1 << n;
    DVector::from_element(dim, Complex64::new((dim as f64).powf(-0.5), 0.0))
}

/// `U(theta)|+>^n` by multiplying dense layer unitaries, ZZ before X in each layer.
pub fn hva_state(n: usize, boundary: Boundary, theta: &[f64]) -> DVector<Complex64> {
    let zz = zz_sum(n, boundary);
    let x = x_sum(n);
    let mut psi = plus_state(n);
    for pair in theta.chunks(2) {
        psi = exp_minus_i(&zz, pair[0]) * psi;
        psi = exp_minus_i(&x, pair[1]) * psi;
    }
    psi
}

pub fn expectation(psi: &DVector<Complex64>, h: &DMatrix<f64>) -> f64 {
    let hc = h.map(|x| Complex64::new(x, 0.0));
    psi.dotc(&(hc * psi)).re
}

/// Periodic-chain ground energy from the free-fermion dispersion in the even
/// parity sector (antiperiodic momenta). Valid for even `n`.
pub fn free_fermion_closed(n: usize, h: f64) -> f64 {
    assert!(n.is_multiple_of(2));
    -(0..n)
        .map(|m| {
            let k = std::f64::consts::PI * (2 * m + 1) as f64 / n as f64;
            (1.0 + h * h - 2.0 * h * k.cos()).sqrt()
        })
        .sum::<f64>()
}

/// Benchmark grid of (qubits, depth) cells.
pub const GRID: [(usize, usize); 4] = [(4, 4), (6, 10), (8, 14), (10, 22)];

pub fn seeded_theta(len: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect()
}
