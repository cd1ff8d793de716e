//! Optimizers: the Bees Algorithm, Adam, and the convergence driver shared by both.

mod adam;
mod boa;
mod driver;
pub mod rng;

pub use adam::{adam_step, AdamConfig, AdamMoments};
pub use boa::{boa_cycle, boa_init, BoaConfig, BoaState, CycleReport, PatchShrink, Site};
pub use driver::{
    run_optimization, AdamRun, ConvergenceTrace, Method, RunOutcome, RunSettings, Termination,
    TraceRecord,
};

use serde::{Deserialize, Serialize};

use crate::error::{Result, VqeError};
use crate::scalar::Real;

/// Half-open search interval `[lower, upper)` applied to every coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lower: T, upper: T) -> Result<Self> {
        let iv = Self { lower, upper };
        iv.validate()?;
        Ok(iv)
    }

    /// `[-pi, pi)`.
    pub fn angles() -> Self {
        Self {
            lower: -T::PI(),
            upper: T::PI(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower < self.upper) {
            return Err(VqeError::InvalidConfig(format!(
                "bounds [{}, {}) must be finite with lower < upper",
                self.lower, self.upper
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lower && x < self.upper
    }

    /// Clamps into `[lower, upper)`.
    pub fn clamp(&self, x: T) -> T {
        if x < self.lower {
            self.lower
        } else if x >= self.upper {
            let below = self.upper - self.upper.abs().max(T::one()) * T::epsilon();
            below.max(self.lower)
        } else {
            x
        }
    }
}

impl<T: Real> Default for Interval<T> {
    fn default() -> Self {
        Self::angles()
    }
}
