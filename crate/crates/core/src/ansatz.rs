//! Hamiltonian Variational Ansatz for the TFIM chain.
//!
//! `U(theta) = U_L ... U_1` with `U_l = exp(-i theta_{l,2} H_X) exp(-i theta_{l,1} H_ZZ)`,
//! i.e. every layer applies the ZZ exponential first and the X exponential
//! second. `H_ZZ = sum_{couplings} Z_i Z_j`, `H_X = sum_i X_i`. The field
//! strength and signs are absorbed into the trainable angles, so `theta = 0`
//! prepares `|+>^n`.
//!
//! Parameters are ordered `theta_{1,1}, theta_{1,2}, theta_{2,1}, ...`.

use std::ops::{Deref, DerefMut};
use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;

use crate::error::{Result, VqeError};
use crate::pauli::{coupling_pairs, Boundary, Pauli, PauliString, PauliSum};
use crate::scalar::{cast, Real};
use crate::statevector::{apply_x_sum, check_qubits, evolve_x, inner, StateVector, ZzPhaseTable};

/// Generators per layer.
pub const GENERATORS_PER_LAYER: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `sum Z_i Z_{i+1}` over the chain couplings.
    ZzCoupling,
    /// `sum X_i`.
    XField,
}

/// Trainable angles of an HVA circuit.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ParameterVector<T>(Vec<T>);

impl<T: Real> ParameterVector<T> {
    pub fn zeros(len: usize) -> Self {
        Self(vec![T::zero(); len])
    }

    /// Uniform draw from `[lo, hi)` per coordinate.
    pub fn random_uniform<R: Rng + ?Sized>(len: usize, lo: T, hi: T, rng: &mut R) -> Self {
        Self((0..len).map(|_| uniform_in(lo, hi, rng)).collect())
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

/// Uniform sample in `[lo, hi)`; a draw that rounds up to `hi` wraps to `lo`.
pub(crate) fn uniform_in<T: Real, R: Rng + ?Sized>(lo: T, hi: T, rng: &mut R) -> T {
    let u: f64 = rng.random();
    let x = lo + (hi - lo) * cast::<T>(u);
    if x >= hi {
        lo
    } else {
        x
    }
}

impl<T> From<Vec<T>> for ParameterVector<T> {
    fn from(v: Vec<T>) -> Self {
        Self(v)
    }
}

impl<T> Deref for ParameterVector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> DerefMut for ParameterVector<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.0
    }
}

/// Layered HVA circuit description. Cheap to clone; the ZZ phase table is shared.
#[derive(Clone, Debug)]
pub struct HvaCircuit {
    n: usize,
    layers: usize,
    boundary: Boundary,
    table: Arc<ZzPhaseTable>,
}

impl PartialEq for HvaCircuit {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.layers == other.layers && self.boundary == other.boundary
    }
}

impl HvaCircuit {
    pub fn new(n: usize, layers: usize, boundary: Boundary) -> Result<Self> {
        check_qubits(n)?;
        if layers == 0 {
            return Err(VqeError::InvalidConfig("circuit depth must be at least 1".into()));
        }
        Ok(Self {
            n,
            layers,
            boundary,
            table: Arc::new(ZzPhaseTable::new(n, boundary)),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// `M = 2 L`.
    pub fn num_parameters(&self) -> usize {
        self.layers * GENERATORS_PER_LAYER
    }

    pub fn coupling_count(&self) -> usize {
        self.table.couplings()
    }

    pub fn generator(&self, index: usize) -> Generator {
        if index.is_multiple_of(GENERATORS_PER_LAYER) {
            Generator::ZzCoupling
        } else {
            Generator::XField
        }
    }

    /// The generators as Pauli sums, in sublayer order `(H_ZZ, H_X)`.
    pub fn generators<T: Real>(&self) -> [PauliSum<T>; 2] {
        let n = self.n;
        let zz = PauliSum::from_terms(
            n,
            coupling_pairs(n, self.boundary).into_iter().map(|(i, j)| {
                PauliString::sparse(T::one(), n, &[(i, Pauli::Z), (j, Pauli::Z)]).unwrap()
            }),
        )
        .unwrap();
        let x = PauliSum::from_terms(
            n,
            (0..n).map(|i| PauliString::sparse(T::one(), n, &[(i, Pauli::X)]).unwrap()),
        )
        .unwrap();
        [zz, x]
    }

    fn check_len<T>(&self, theta: &[T]) -> Result<()> {
        if theta.len() != self.num_parameters() {
            return Err(VqeError::ParameterLength {
                expected: self.num_parameters(),
                found: theta.len(),
            });
        }
        Ok(())
    }

    fn check_finite<T: Real>(theta: &[T]) -> Result<()> {
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(VqeError::NonFinite("circuit parameter"));
        }
        Ok(())
    }

    #[inline]
    fn apply_gate<T: Real>(&self, amps: &mut [Complex<T>], index: usize, angle: T) {
        match self.generator(index) {
            Generator::ZzCoupling => self.table.evolve(amps, angle),
            Generator::XField => evolve_x(amps, self.n, angle),
        }
    }

    /// Multiplies by `-i H_k` for the generator of parameter `index`.
    fn apply_generator<T: Real>(&self, amps: &mut Vec<Complex<T>>, index: usize) {
        match self.generator(index) {
            Generator::ZzCoupling => self.table.apply(amps),
            Generator::XField => *amps = apply_x_sum(amps, self.n),
        }
        let minus_i = Complex::new(T::zero(), -T::one());
        for a in amps.iter_mut() {
            *a *= minus_i;
        }
    }

    fn check_base<T: Real>(&self, base: &StateVector<T>) -> Result<()> {
        if base.num_qubits() != self.n {
            return Err(VqeError::DimensionMismatch {
                expected: self.n,
                found: base.num_qubits(),
            });
        }
        Ok(())
    }

    /// `U(theta)|+>^n`.
    pub fn prepare_state<T: Real>(&self, theta: &[T]) -> Result<StateVector<T>> {
        self.prepare_from(&StateVector::plus_state(self.n)?, theta)
    }

    /// `U(theta)|base>`.
    pub fn prepare_from<T: Real>(&self, base: &StateVector<T>, theta: &[T]) -> Result<StateVector<T>> {
        self.check_len(theta)?;
        Self::check_finite(theta)?;
        self.check_base(base)?;
        let mut amps = base.amplitudes().to_vec();
        for (g, &angle) in theta.iter().enumerate() {
            self.apply_gate(&mut amps, g, angle);
        }
        let mut state = StateVector::from_raw(self.n, amps);
        state.renormalize_if_drifted();
        Ok(state)
    }

    /// `d U(theta)|+>^n / d theta_index` (not normalized).
    pub fn state_derivative<T: Real>(&self, theta: &[T], index: usize) -> Result<Vec<Complex<T>>> {
        self.state_derivative_from(&StateVector::plus_state(self.n)?, theta, index)
    }

    pub fn state_derivative_from<T: Real>(
        &self,
        base: &StateVector<T>,
        theta: &[T],
        index: usize,
    ) -> Result<Vec<Complex<T>>> {
        self.check_len(theta)?;
        Self::check_finite(theta)?;
        self.check_base(base)?;
        if index >= theta.len() {
            return Err(VqeError::IndexOutOfRange {
                index,
                len: theta.len(),
            });
        }
        let mut amps = base.amplitudes().to_vec();
        for (g, &angle) in theta.iter().enumerate() {
            self.apply_gate(&mut amps, g, angle);
            if g == index {
                self.apply_generator(&mut amps, g);
            }
        }
        Ok(amps)
    }

    /// All `M` state derivatives from `base`, one forward sweep per index.
    pub fn state_derivatives_from<T: Real>(
        &self,
        base: &StateVector<T>,
        theta: &[T],
    ) -> Result<Vec<Vec<Complex<T>>>> {
        (0..theta.len())
            .map(|i| self.state_derivative_from(base, theta, i))
            .collect()
    }

    /// `dE/dtheta` for `E = <psi(theta)|H|psi(theta)>` by adjoint differentiation.
    pub fn energy_gradient<T: Real>(&self, theta: &[T], hamiltonian: &PauliSum<T>) -> Result<Vec<T>> {
        Ok(self.value_and_gradient(theta, hamiltonian)?.1)
    }

    /// Energy and its gradient from one forward and one backward sweep.
    ///
    /// Backward sweep keeps `psi_g` (state after gate `g`) and
    /// `phi_g = U_{>g}^dagger H |psi>`; then `dE/dtheta_g = 2 Re <phi_g| -i G_g |psi_g>`.
    pub fn value_and_gradient<T: Real>(
        &self,
        theta: &[T],
        hamiltonian: &PauliSum<T>,
    ) -> Result<(T, Vec<T>)> {
        if hamiltonian.num_qubits() != self.n {
            return Err(VqeError::DimensionMismatch {
                expected: self.n,
                found: hamiltonian.num_qubits(),
            });
        }
        let state = self.prepare_state(theta)?;
        let mut psi = state.into_amplitudes();
        let mut phi = hamiltonian.apply(&psi)?;
        let energy = inner(&psi, &phi).re;

        let mut grad = vec![T::zero(); theta.len()];
        let two = cast::<T>(2.0);
        for g in (0..theta.len()).rev() {
            let mut generated = psi.clone();
            self.apply_generator(&mut generated, g);
            grad[g] = two * inner(&phi, &generated).re;
            self.apply_gate(&mut psi, g, -theta[g]);
            self.apply_gate(&mut phi, g, -theta[g]);
        }
        Ok((energy, grad))
    }
}
