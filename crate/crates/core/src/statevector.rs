//! Dense complex statevectors and the two layer primitives of the HVA circuit.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex;
use rand::Rng;

use crate::error::{Result, VqeError};
use crate::pauli::{coupling_pairs, Boundary, PauliSum, MAX_QUBITS, MIN_QUBITS};
use crate::scalar::{cast, cis_neg, Real};

/// Norm drift beyond which a prepared state is renormalized.
pub const RENORMALIZE_THRESHOLD: f64 = 1e-8;

static RENORMALIZATIONS: AtomicU64 = AtomicU64::new(0);

/// Number of drift-triggered renormalizations performed by this process.
pub fn renormalization_count() -> u64 {
    RENORMALIZATIONS.load(Ordering::Relaxed)
}

pub(crate) fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// `sum_k conj(a_k) b_k` over raw amplitude slices.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x.conj() * y)
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n < MIN_QUBITS {
        return Err(VqeError::TooFewQubits {
            found: n,
            min: MIN_QUBITS,
        });
    }
    if n > MAX_QUBITS {
        return Err(VqeError::TooManyQubits {
            found: n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Eigenvalue `d(b) = sum_{couplings} z_i(b) z_j(b)` of the ZZ generator for
/// every basis index `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZzPhaseTable {
    couplings: usize,
    /// `d(b) + couplings`, so entries index `0..=2*couplings`.
    shifted: Vec<u16>,
}

impl ZzPhaseTable {
    pub fn new(n: usize, boundary: Boundary) -> Self {
        let pairs = coupling_pairs(n, boundary);
        let couplings = pairs.len();
        let shifted = (0..1usize << n)
            .map(|b| {
                let d: i64 = pairs
                    .iter()
                    .map(|&(i, j)| {
                        let zi = (b >> (n - 1 - i)) & 1;
                        let zj = (b >> (n - 1 - j)) & 1;
                        if zi == zj {
                            1
                        } else {
                            -1
                        }
                    })
                    .sum();
                (d + couplings as i64) as u16
            })
            .collect();
        Self { couplings, shifted }
    }

    pub fn couplings(&self) -> usize {
        self.couplings
    }

    pub fn eigenvalue(&self, basis: usize) -> i64 {
        self.shifted[basis] as i64 - self.couplings as i64
    }

    pub fn len(&self) -> usize {
        self.shifted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifted.is_empty()
    }

    /// `amps[b] *= exp(-i angle d(b))`. Only `2 n_f + 1` distinct phases exist.
    pub(crate) fn evolve<T: Real>(&self, amps: &mut [Complex<T>], angle: T) {
        let phases: Vec<Complex<T>> = (0..=2 * self.couplings)
            .map(|k| cis_neg(angle * cast::<T>(k as f64 - self.couplings as f64)))
            .collect();
        for (a, &k) in amps.iter_mut().zip(&self.shifted) {
            *a *= phases[k as usize];
        }
    }

    /// `amps[b] *= d(b)`: the ZZ generator applied to a vector.
    pub(crate) fn apply<T: Real>(&self, amps: &mut [Complex<T>]) {
        for (a, &k) in amps.iter_mut().zip(&self.shifted) {
            *a *= cast::<T>(k as f64 - self.couplings as f64);
        }
    }
}

/// `exp(-i angle X)` on every qubit: one butterfly pass per qubit.
pub(crate) fn evolve_x<T: Real>(amps: &mut [Complex<T>], n: usize, angle: T) {
    let (s, c) = angle.sin_cos();
    let mis = Complex::new(T::zero(), -s);
    for q in 0..n {
        let stride = 1usize << (n - 1 - q);
        for block in amps.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let x0 = *a0;
                let x1 = *a1;
                *a0 = x0 * c + mis * x1;
                *a1 = mis * x0 + x1 * c;
            }
        }
    }
}

/// `sum_q X_q` applied to a vector.
pub(crate) fn apply_x_sum<T: Real>(amps: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    let mut out = vec![zero(); amps.len()];
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        for (b, o) in out.iter_mut().enumerate() {
            *o += amps[b ^ bit];
        }
    }
    out
}

/// Unit-norm state of `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|+>^n`.
    pub fn plus_state(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let a = T::one() / cast::<T>(dim as f64).sqrt();
        Ok(Self {
            n,
            amplitudes: vec![Complex::new(a, T::zero()); dim],
        })
    }

    /// Computational basis state `|index>`, qubit 0 as the most significant bit.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(VqeError::IndexOutOfRange { index, len: dim });
        }
        let mut amplitudes = vec![zero(); dim];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n, amplitudes })
    }

    /// Wraps amplitudes that are already normalized to within `1e-8`.
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_qubits(n)?;
        if amplitudes.len() != 1usize << n {
            return Err(VqeError::DimensionMismatch {
                expected: 1 << n,
                found: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(VqeError::NonFinite("amplitude"));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>();
        let tol = crate::scalar::floor_tolerance::<T>(RENORMALIZE_THRESHOLD, T::one());
        if (norm - T::one()).abs() > tol {
            return Err(VqeError::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { n, amplitudes })
    }

    pub(crate) fn from_raw(n: usize, amplitudes: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1usize << n);
        Self { n, amplitudes }
    }

    /// Random state with i.i.d. Gaussian amplitudes, normalized (Haar distributed).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_qubits(n)?;
        let mut gauss = || {
            // Box-Muller
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random::<f64>();
            let r = (-2.0 * u1.ln()).sqrt();
            let t = std::f64::consts::TAU * u2;
            (r * t.cos(), r * t.sin())
        };
        let raw: Vec<(f64, f64)> = (0..1usize << n).map(|_| gauss()).collect();
        let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        let amplitudes = raw
            .into_iter()
            .map(|(a, b)| Complex::new(cast(a / norm), cast(b / norm)))
            .collect();
        Ok(Self { n, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_same_size(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(VqeError::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }

    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_size(other.dim())?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// Multiplies by the global phase `exp(i phi)`.
    pub fn with_global_phase(mut self, phi: T) -> Self {
        let phase = cis_neg(-phi);
        for a in &mut self.amplitudes {
            *a *= phase;
        }
        self
    }

    /// Exact unitary `exp(-i angle sum_{couplings} Z_i Z_j)`.
    pub fn evolve_zz_layer(self, angle: T, boundary: Boundary) -> Self {
        let table = ZzPhaseTable::new(self.n, boundary);
        self.evolve_zz_with(&table, angle)
    }

    pub fn evolve_zz_with(mut self, table: &ZzPhaseTable, angle: T) -> Self {
        debug_assert_eq!(table.len(), self.dim());
        table.evolve(&mut self.amplitudes, angle);
        self
    }

    /// Exact unitary `exp(-i angle sum_q X_q)`.
    pub fn evolve_x_layer(mut self, angle: T) -> Self {
        evolve_x(&mut self.amplitudes, self.n, angle);
        self
    }

    /// `<psi|O|psi>` including its (ideally zero) imaginary part.
    pub fn expectation_complex(&self, op: &PauliSum<T>) -> Result<Complex<T>> {
        if op.num_qubits() != self.n {
            return Err(VqeError::DimensionMismatch {
                expected: self.n,
                found: op.num_qubits(),
            });
        }
        let mut total = zero();
        for term in op.terms() {
            let masks = term.masks();
            let mut acc = zero::<T>();
            for (b, &a) in self.amplitudes.iter().enumerate() {
                acc += self.amplitudes[b ^ masks.flip].conj() * masks.phase::<T>(b) * a;
            }
            total += acc * term.coefficient();
        }
        Ok(total)
    }

    /// Real expectation value `<psi|O|psi>`.
    pub fn expectation(&self, op: &PauliSum<T>) -> Result<T> {
        Ok(self.expectation_complex(op)?.re)
    }

    /// Rescales to unit norm when the drift exceeds [`RENORMALIZE_THRESHOLD`].
    /// Returns whether a rescale happened.
    pub fn renormalize_if_drifted(&mut self) -> bool {
        let norm = self.norm_sqr();
        if (norm - T::one()).abs() <= cast(RENORMALIZE_THRESHOLD) {
            return false;
        }
        let scale = T::one() / norm.sqrt();
        for a in &mut self.amplitudes {
            *a *= scale;
        }
        RENORMALIZATIONS.fetch_add(1, Ordering::Relaxed);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{build_tfim, PauliString, TfimSpec};
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn plus_state_amplitudes() {
        for (n, amp) in [(2, 0.5), (4, 0.25), (10, 0.03125)] {
            let s = StateVector::<f64>::plus_state(n).unwrap();
            assert_eq!(s.dim(), 1 << n);
            assert!(s.amplitudes().iter().all(|a| a.re == amp && a.im == 0.0));
        }
        assert!(StateVector::<f64>::plus_state(13).is_err());
        assert!(StateVector::<f64>::plus_state(1).is_err());
    }

    #[test]
    fn zz_phases_two_qubits() {
        let theta: f64 = 0.37;
        let s = StateVector::from_amplitudes(
            2,
            vec![Complex::new(0.5, 0.0); 4],
        )
        .unwrap()
        .evolve_zz_layer(theta, Boundary::Open);
        let minus = Complex::new(theta.cos(), -theta.sin()) * 0.5;
        let plus = Complex::new(theta.cos(), theta.sin()) * 0.5;
        let a = s.amplitudes();
        assert!(close(a[0], minus, 1e-15) && close(a[3], minus, 1e-15));
        assert!(close(a[1], plus, 1e-15) && close(a[2], plus, 1e-15));
    }

    #[test]
    fn zero_angle_is_identity() {
        let mut rng = rand::rng();
        let s = StateVector::<f64>::random(4, &mut rng).unwrap();
        assert_eq!(s.clone().evolve_zz_layer(0.0, Boundary::Closed), s);
        assert_eq!(s.clone().evolve_x_layer(0.0), s);
    }

    #[test]
    fn x_layer_on_basis_state() {
        let s = StateVector::<f64>::basis_state(2, 0).unwrap().evolve_x_layer(FRAC_PI_2);
        let a = s.amplitudes();
        assert!(close(a[3], Complex::new(-1.0, 0.0), 1e-15));
        for a in &a[..3] {
            assert!(a.norm() <= 1e-15);
        }
    }

    #[test]
    fn plus_state_is_mixer_eigenstate() {
        let n = 5;
        let angle = 0.83;
        let s = StateVector::<f64>::plus_state(n).unwrap().evolve_x_layer(angle);
        let phase = Complex::new((n as f64 * angle).cos(), -(n as f64 * angle).sin());
        let amp = 1.0 / (32f64).sqrt();
        for a in s.amplitudes() {
            assert!(close(*a, phase * amp, 1e-14));
        }
    }

    #[test]
    fn expectation_examples() {
        for boundary in [Boundary::Open, Boundary::Closed] {
            let spec = TfimSpec::new(4, 1.1, boundary).unwrap();
            let e = StateVector::plus_state(4).unwrap().expectation(&build_tfim(&spec)).unwrap();
            assert!((e + 4.4f64).abs() <= 1e-12);
        }
        let zz =
            PauliSum::from_terms(2, [PauliString::from_label(-1.0, "ZZ").unwrap()]).unwrap();
        let e = StateVector::<f64>::basis_state(2, 0).unwrap().expectation(&zz).unwrap();
        assert_eq!(e, -1.0);
    }

    #[test]
    fn inner_products() {
        let zero = StateVector::<f64>::basis_state(2, 0).unwrap();
        let three = StateVector::<f64>::basis_state(2, 3).unwrap();
        let plus = StateVector::<f64>::plus_state(2).unwrap();
        assert_eq!(zero.inner_product(&three).unwrap(), Complex::new(0.0, 0.0));
        assert_eq!(plus.inner_product(&zero).unwrap(), Complex::new(0.5, 0.0));
        assert!((plus.inner_product(&plus).unwrap() - 1.0).norm() <= 1e-15);
        let big = StateVector::<f64>::plus_state(3).unwrap();
        assert!(plus.inner_product(&big).is_err());
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let spec = TfimSpec::new(3, 1.0, Boundary::Open).unwrap();
        let s = StateVector::<f64>::plus_state(2).unwrap();
        assert!(s.expectation(&build_tfim(&spec)).is_err());
    }

    #[test]
    fn from_amplitudes_validation() {
        assert!(StateVector::<f64>::from_amplitudes(2, vec![Complex::new(1.0, 0.0); 4]).is_err());
        assert!(StateVector::<f64>::from_amplitudes(2, vec![Complex::new(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn renormalization_triggers_only_on_drift() {
        let mut s = StateVector::<f64>::plus_state(2).unwrap();
        assert!(!s.renormalize_if_drifted());
        let before = renormalization_count();
        s.amplitudes[0] *= 1.001;
        assert!(s.renormalize_if_drifted());
        assert!((s.norm_sqr() - 1.0).abs() <= 1e-14);
        assert!(renormalization_count() > before);
    }

    #[test]
    fn phase_table_range() {
        let t = ZzPhaseTable::new(4, Boundary::Closed);
        assert_eq!(t.eigenvalue(0), 4);
        assert_eq!(t.eigenvalue(0b0101), -4);
        let t = ZzPhaseTable::new(3, Boundary::Open);
        assert_eq!(t.eigenvalue(0b010), -2);
        assert_eq!(t.eigenvalue(0b001), 0);
    }
}
