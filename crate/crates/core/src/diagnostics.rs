//! Loss-landscape diagnostics: quantum Fisher information, Fubini-Study
//! distance, finite-difference Hessian, and spectrum summaries.
//!
//! The QFIM uses the factor-4 normalization
//! `F_ij = 4 Re[<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>]`, and the
//! distance is `D(a, b) = 1 - |<a|b>|^2`. With these two conventions
//! `D(psi(theta), psi(theta + delta)) = delta^T F delta / 4 + O(|delta|^3)`;
//! [`distance_consistency_residual`] measures the deviation from that relation.

use num_complex::Complex;
use rayon::prelude::*;

use crate::ansatz::HvaCircuit;
use crate::error::{Result, VqeError};
use crate::pauli::PauliSum;
use crate::scalar::{cast, floor_tolerance, Real};
use crate::statevector::{inner, StateVector};

/// Relative eigenvalue cutoff used for QFIM ranks.
pub const QFIM_RANK_TOLERANCE: f64 = 1e-10;
/// Relative eigenvalue cutoff used for Hessian ranks; finite differences put a
/// noise floor around `1e-8` on entries.
pub const HESSIAN_RANK_TOLERANCE: f64 = 1e-6;
/// Default central-difference step for the Hessian.
pub const HESSIAN_STEP: f64 = 1e-4;

const QFIM_SYMMETRY_TOLERANCE: f64 = 1e-9;
const QFIM_PSD_TOLERANCE: f64 = 1e-8;

/// Dense real square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn from_row_major(dim: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(VqeError::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = T::one();
        }
        Self { dim, data }
    }

    pub fn diagonal(values: &[T]) -> Self {
        let dim = values.len();
        let mut data = vec![T::zero(); dim * dim];
        for (i, &v) in values.iter().enumerate() {
            data[i * dim + i] = v;
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.dim.max(1))
    }

    /// `max |A_ij - A_ji|`.
    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// `(A + A^T) / 2`.
    pub fn symmetrized(&self) -> Self {
        let half = cast::<T>(0.5);
        let mut data = self.data.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                data[i * self.dim + j] = half * (self.get(i, j) + self.get(j, i));
            }
        }
        Self { dim: self.dim, data }
    }

    /// `x^T A x`.
    pub fn quadratic_form(&self, x: &[T]) -> T {
        self.rows()
            .zip(x)
            .map(|(row, &xi)| xi * row.iter().zip(x).map(|(&a, &xj)| a * xj).sum::<T>())
            .sum()
    }

    pub fn eigen(&self) -> crate::scalar::SymmetricEigen<T> {
        T::symmetric_eigen(self.dim, &self.data)
    }
}

/// Number of eigenvalues with `|lambda| > rel_tol * max |lambda|`.
fn relative_rank<T: Real>(eigenvalues: &[T], rel_tol: T) -> usize {
    let scale = eigenvalues.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return 0;
    }
    eigenvalues.iter().filter(|v| v.abs() > rel_tol * scale).count()
}

/// Quantum Fisher information matrix at `theta`.
#[derive(Clone, Debug, PartialEq)]
pub struct QfimMatrix<T> {
    pub matrix: SymMatrix<T>,
    pub theta: Vec<T>,
    pub rank_tolerance: T,
}

impl<T: Real> QfimMatrix<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.matrix.get(i, j)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// QFIM of `U(theta)|base>` from the analytic state derivatives.
///
/// Fails if the computed matrix is not symmetric to `1e-9` or has an
/// eigenvalue below `-1e-8`.
pub fn qfim<T: Real>(circuit: &HvaCircuit, theta: &[T], base: &StateVector<T>) -> Result<QfimMatrix<T>> {
    let psi = circuit.prepare_from(base, theta)?;
    let derivs = circuit.state_derivatives_from(base, theta)?;
    let m = derivs.len();
    let overlaps: Vec<Complex<T>> = derivs.iter().map(|d| inner(d, psi.amplitudes())).collect();
    let four = cast::<T>(4.0);
    let data: Vec<T> = (0..m * m)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / m, k % m);
            let g = inner(&derivs[i], &derivs[j]) - overlaps[i] * overlaps[j].conj();
            four * g.re
        })
        .collect();
    let raw = SymMatrix::from_row_major(m, data)?;
    let scale = raw.max_abs();
    let asym = raw.max_asymmetry();
    if asym > floor_tolerance(QFIM_SYMMETRY_TOLERANCE, scale) {
        return Err(VqeError::MatrixInvariant(format!("QFIM asymmetry {asym:e}")));
    }
    let matrix = raw.symmetrized();
    if m > 0 {
        let min_eig = matrix.eigen().values[0];
        if min_eig < -floor_tolerance(QFIM_PSD_TOLERANCE, scale) {
            return Err(VqeError::MatrixInvariant(format!(
                "QFIM eigenvalue {min_eig:e} below PSD tolerance"
            )));
        }
    }
    Ok(QfimMatrix {
        matrix,
        theta: theta.to_vec(),
        rank_tolerance: cast(QFIM_RANK_TOLERANCE),
    })
}

/// Number of independent state-space directions reachable from `theta`.
pub fn qfim_rank<T: Real>(f: &QfimMatrix<T>) -> usize {
    relative_rank(&f.matrix.eigen().values, f.rank_tolerance)
}

/// `D(a, b) = 1 - |<a|b>|^2`, in `[0, 1]` and blind to global phases.
pub fn fubini_study_distance<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    let overlap = a.inner_product(b)?.norm_sqr();
    Ok((T::one() - overlap).max(T::zero()).min(T::one()))
}

/// `|D(psi(theta), psi(theta + delta)) - delta^T F delta / 4|`.
pub fn distance_consistency_residual<T: Real>(
    circuit: &HvaCircuit,
    base: &StateVector<T>,
    f: &QfimMatrix<T>,
    delta: &[T],
) -> Result<T> {
    if delta.len() != f.theta.len() {
        return Err(VqeError::ParameterLength {
            expected: f.theta.len(),
            found: delta.len(),
        });
    }
    let shifted: Vec<T> = f.theta.iter().zip(delta).map(|(&t, &d)| t + d).collect();
    let a = circuit.prepare_from(base, &f.theta)?;
    let b = circuit.prepare_from(base, &shifted)?;
    let d = fubini_study_distance(&a, &b)?;
    Ok((d - f.matrix.quadratic_form(delta) / cast(4.0)).abs())
}

/// Symmetrized finite-difference Hessian.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianMatrix<T> {
    pub matrix: SymMatrix<T>,
    pub theta: Vec<T>,
    pub fd_step: T,
    /// `max |A - A^T|` before symmetrization.
    pub raw_asymmetry: T,
}

/// Hessian from central differences of an analytic gradient:
/// `A_ij = (g_j(theta + h e_i) - g_j(theta - h e_i)) / 2h`, returned as `(A + A^T) / 2`.
pub fn hessian_from_gradient<T, G>(gradient: G, theta: &[T], step: T) -> Result<HessianMatrix<T>>
where
    T: Real,
    G: Fn(&[T]) -> Result<Vec<T>> + Sync,
{
    if !(step > T::zero() && step.is_finite()) {
        return Err(VqeError::InvalidConfig("hessian step must be > 0".into()));
    }
    let m = theta.len();
    let two_h = step + step;
    let rows: Vec<Vec<T>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut plus = theta.to_vec();
            let mut minus = theta.to_vec();
            plus[i] += step;
            minus[i] -= step;
            let gp = gradient(&plus)?;
            let gm = gradient(&minus)?;
            if gp.len() != m || gm.len() != m {
                return Err(VqeError::DimensionMismatch {
                    expected: m,
                    found: gp.len().min(gm.len()),
                });
            }
            Ok(gp.iter().zip(&gm).map(|(&a, &b)| (a - b) / two_h).collect())
        })
        .collect::<Result<_>>()?;
    let data: Vec<T> = rows.into_iter().flatten().collect();
    if data.iter().any(|v| !v.is_finite()) {
        return Err(VqeError::NonFinite("hessian entry"));
    }
    let raw = SymMatrix::from_row_major(m, data)?;
    Ok(HessianMatrix {
        raw_asymmetry: raw.max_asymmetry(),
        matrix: raw.symmetrized(),
        theta: theta.to_vec(),
        fd_step: step,
    })
}

/// Hessian of the VQE energy `<psi(theta)|H|psi(theta)>`.
pub fn hessian<T: Real>(
    circuit: &HvaCircuit,
    theta: &[T],
    hamiltonian: &PauliSum<T>,
    step: T,
) -> Result<HessianMatrix<T>> {
    hessian_from_gradient(|x| circuit.energy_gradient(x, hamiltonian), theta, step)
}

/// Sorted spectrum of a symmetric matrix with rank bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport<T> {
    /// Ascending.
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Vec<Vec<T>>,
    pub rank: usize,
    pub zero_count: usize,
    pub positive_count: usize,
    pub negative_count: usize,
}

pub fn spectrum_report<T: Real>(matrix: &SymMatrix<T>, rel_tol: T) -> Result<SpectrumReport<T>> {
    let asym = matrix.max_asymmetry();
    if asym > floor_tolerance(QFIM_SYMMETRY_TOLERANCE, matrix.max_abs()) {
        return Err(VqeError::MatrixInvariant(format!("asymmetric input ({asym:e})")));
    }
    let eig = matrix.eigen();
    let scale = eig.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let cutoff = rel_tol * scale;
    let live = |v: &T| scale > T::zero() && v.abs() > cutoff;
    let rank = relative_rank(&eig.values, rel_tol);
    Ok(SpectrumReport {
        positive_count: eig.values.iter().filter(|v| live(v) && **v > T::zero()).count(),
        negative_count: eig.values.iter().filter(|v| live(v) && **v < T::zero()).count(),
        zero_count: matrix.dim() - rank,
        rank,
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
    })
}
