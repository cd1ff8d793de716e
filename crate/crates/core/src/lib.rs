//! Statevector workbench for training a Hamiltonian Variational Ansatz on the
//! transverse-field Ising chain.
//!
//! The crate covers the full pipeline:
//!
//! - [`pauli`]: Pauli sums, the TFIM Hamiltonian, dense matrices and the
//!   exact ground-state energy;
//! - [`statevector`]: `2^n` amplitude states and the two layer unitaries;
//! - [`ansatz`]: the layered HVA circuit, analytic state derivatives and
//!   adjoint gradients;
//! - [`loss`]: the VQE energy, the weighted training-set loss and the
//!   [`Objective`](loss::Objective) abstraction;
//! - [`optim`]: the Bees Algorithm, Adam and the convergence driver;
//! - [`diagnostics`]: QFIM, Fubini-Study distance, Hessian and spectra.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! experiment harness uses.

pub mod ansatz;
pub mod diagnostics;
pub mod error;
pub mod loss;
pub mod optim;
pub mod pauli;
pub mod scalar;
pub mod statevector;

pub use ansatz::{Generator, HvaCircuit};
pub use error::{Result, VqeError};
pub use optim::{Interval, Method, Termination};
pub use pauli::{build_tfim, exact_ground_energy, to_dense, Boundary, Pauli};
pub use scalar::Real;

pub type PauliString64 = pauli::PauliString<f64>;
pub type PauliSum64 = pauli::PauliSum<f64>;
pub type TfimSpec64 = pauli::TfimSpec<f64>;
pub type StateVector64 = statevector::StateVector<f64>;
pub type StateVector32 = statevector::StateVector<f32>;
pub type ParameterVector64 = ansatz::ParameterVector<f64>;
pub type TrainingSet64 = loss::TrainingSet<f64>;
pub type VqeObjective64 = loss::VqeObjective<f64>;
pub type BoaConfig64 = optim::BoaConfig<f64>;
pub type BoaState64 = optim::BoaState<f64>;
pub type AdamConfig64 = optim::AdamConfig<f64>;
pub type AdamRun64 = optim::AdamRun<f64>;
pub type Method64 = optim::Method<f64>;
pub type RunSettings64 = optim::RunSettings<f64>;
pub type ConvergenceTrace64 = optim::ConvergenceTrace<f64>;
pub type TraceRecord64 = optim::TraceRecord<f64>;
pub type RunOutcome64 = optim::RunOutcome<f64>;
pub type QfimMatrix64 = diagnostics::QfimMatrix<f64>;
pub type HessianMatrix64 = diagnostics::HessianMatrix<f64>;
pub type SymMatrix64 = diagnostics::SymMatrix<f64>;
