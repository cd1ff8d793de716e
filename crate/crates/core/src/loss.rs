//! Objective functions: the VQE energy and the weighted training-set loss.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::ansatz::HvaCircuit;
use crate::error::{Result, VqeError};
use crate::pauli::PauliSum;
use crate::scalar::Real;
use crate::statevector::StateVector;

/// `E(theta) = <psi(theta)|H|psi(theta)>` with `|psi(theta)> = U(theta)|+>^n`.
pub fn vqe_energy<T: Real>(circuit: &HvaCircuit, theta: &[T], hamiltonian: &PauliSum<T>) -> Result<T> {
    circuit.prepare_state(theta)?.expectation(hamiltonian)
}

/// Weighted set of input states together with the measured observable.
#[derive(Clone, Debug)]
pub struct TrainingSet<T> {
    entries: Vec<(StateVector<T>, T)>,
    observable: PauliSum<T>,
}

impl<T: Real> TrainingSet<T> {
    pub fn new(entries: Vec<(StateVector<T>, T)>, observable: PauliSum<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(VqeError::EmptyTrainingSet);
        }
        for (state, c) in &entries {
            if state.num_qubits() != observable.num_qubits() {
                return Err(VqeError::DimensionMismatch {
                    expected: observable.num_qubits(),
                    found: state.num_qubits(),
                });
            }
            if !c.is_finite() {
                return Err(VqeError::NonFinite("training coefficient"));
            }
        }
        Ok(Self {
            entries,
            observable,
        })
    }

    /// The single-state set `{(|+>^n, 1)}` that turns [`general_loss`] into [`vqe_energy`].
    pub fn vqe(hamiltonian: PauliSum<T>) -> Result<Self> {
        let plus = StateVector::plus_state(hamiltonian.num_qubits())?;
        Self::new(vec![(plus, T::one())], hamiltonian)
    }

    pub fn entries(&self) -> &[(StateVector<T>, T)] {
        &self.entries
    }

    pub fn observable(&self) -> &PauliSum<T> {
        &self.observable
    }

    /// Same states, coefficients multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            entries: self.entries.iter().map(|(s, c)| (s.clone(), *c * factor)).collect(),
            observable: self.observable.clone(),
        }
    }
}

/// `L(theta) = sum_mu c_mu <psi_mu| U^dagger O U |psi_mu>`.
pub fn general_loss<T: Real>(circuit: &HvaCircuit, theta: &[T], set: &TrainingSet<T>) -> Result<T> {
    if set.observable.num_qubits() != circuit.num_qubits() {
        return Err(VqeError::DimensionMismatch {
            expected: circuit.num_qubits(),
            found: set.observable.num_qubits(),
        });
    }
    let mut total = T::zero();
    for (state, c) in &set.entries {
        total += *c * circuit.prepare_from(state, theta)?.expectation(&set.observable)?;
    }
    Ok(total)
}

/// Monotone, thread-safe tally of objective evaluations.
#[derive(Debug, Default)]
pub struct EvaluationCounter(AtomicU64);

impl EvaluationCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&self, amount: u64) {
        self.0.fetch_add(amount, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

/// Something an optimizer can minimize.
pub trait Objective<T: Real>: Sync {
    fn dimension(&self) -> usize;

    fn value(&self, x: &[T]) -> Result<T>;

    fn value_and_gradient(&self, _x: &[T]) -> Result<(T, Vec<T>)> {
        Err(VqeError::GradientUnavailable)
    }
}

/// Circuit-equivalent cost charged for one adjoint gradient.
pub const GRADIENT_EVALUATION_COST: u64 = 2;

/// Wraps an objective and charges every call to a counter: one per value,
/// [`GRADIENT_EVALUATION_COST`] per gradient.
pub struct Counted<'a, T: Real, O: Objective<T> + ?Sized> {
    inner: &'a O,
    counter: EvaluationCounter,
    _scalar: std::marker::PhantomData<fn() -> T>,
}

impl<'a, T: Real, O: Objective<T> + ?Sized> Counted<'a, T, O> {
    pub fn new(inner: &'a O) -> Self {
        Self {
            inner,
            counter: EvaluationCounter::new(),
            _scalar: std::marker::PhantomData,
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.counter.get()
    }
}

impl<T: Real, O: Objective<T> + ?Sized> Objective<T> for Counted<'_, T, O> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn value(&self, x: &[T]) -> Result<T> {
        self.counter.add(1);
        self.inner.value(x)
    }

    fn value_and_gradient(&self, x: &[T]) -> Result<(T, Vec<T>)> {
        self.counter.add(GRADIENT_EVALUATION_COST);
        self.inner.value_and_gradient(x)
    }
}

/// The VQE energy as an optimizer objective.
#[derive(Clone, Debug)]
pub struct VqeObjective<T> {
    circuit: HvaCircuit,
    hamiltonian: PauliSum<T>,
}

impl<T: Real> VqeObjective<T> {
    pub fn new(circuit: HvaCircuit, hamiltonian: PauliSum<T>) -> Result<Self> {
        if circuit.num_qubits() != hamiltonian.num_qubits() {
            return Err(VqeError::DimensionMismatch {
                expected: circuit.num_qubits(),
                found: hamiltonian.num_qubits(),
            });
        }
        Ok(Self {
            circuit,
            hamiltonian,
        })
    }

    pub fn circuit(&self) -> &HvaCircuit {
        &self.circuit
    }

    pub fn hamiltonian(&self) -> &PauliSum<T> {
        &self.hamiltonian
    }
}

impl<T: Real> Objective<T> for VqeObjective<T> {
    fn dimension(&self) -> usize {
        self.circuit.num_parameters()
    }

    fn value(&self, x: &[T]) -> Result<T> {
        vqe_energy(&self.circuit, x, &self.hamiltonian)
    }

    fn value_and_gradient(&self, x: &[T]) -> Result<(T, Vec<T>)> {
        self.circuit.value_and_gradient(x, &self.hamiltonian)
    }
}

/// Closure-backed objective, mostly for tests and toy problems.
pub struct FnObjective<F, G = fn(&[f64]) -> Vec<f64>> {
    dimension: usize,
    value: F,
    gradient: Option<G>,
}

impl<F> FnObjective<F> {
    pub fn new(dimension: usize, value: F) -> Self {
        Self {
            dimension,
            value,
            gradient: None,
        }
    }
}

impl<F, G> FnObjective<F, G> {
    pub fn with_gradient(dimension: usize, value: F, gradient: G) -> Self {
        Self {
            dimension,
            value,
            gradient: Some(gradient),
        }
    }
}

impl<T, F, G> Objective<T> for FnObjective<F, G>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
    G: Fn(&[T]) -> Vec<T> + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, x: &[T]) -> Result<T> {
        Ok((self.value)(x))
    }

    fn value_and_gradient(&self, x: &[T]) -> Result<(T, Vec<T>)> {
        match &self.gradient {
            Some(g) => Ok(((self.value)(x), g(x))),
            None => Err(VqeError::GradientUnavailable),
        }
    }
}
