use serde::{Deserialize, Serialize};

use crate::error::{Result, VqeError};
use crate::scalar::{cast, Real};

/// Adam hyperparameters. Defaults: `lr = 0.01`, `beta1 = 0.9`, `beta2 = 0.999`, `eps = 1e-8`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig<T> {
    pub learning_rate: T,
    pub beta1: T,
    pub beta2: T,
    pub epsilon: T,
}

impl<T: Real> Default for AdamConfig<T> {
    fn default() -> Self {
        Self {
            learning_rate: cast(0.01),
            beta1: cast(0.9),
            beta2: cast(0.999),
            epsilon: cast(1e-8),
        }
    }
}

impl<T: Real> AdamConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |b: T| b >= T::zero() && b < T::one();
        if !(self.learning_rate > T::zero() && self.learning_rate.is_finite()) {
            return Err(VqeError::InvalidConfig("adam learning rate must be > 0".into()));
        }
        if !unit(self.beta1) || !unit(self.beta2) {
            return Err(VqeError::InvalidConfig("adam betas must lie in [0, 1)".into()));
        }
        if !(self.epsilon > T::zero()) {
            return Err(VqeError::InvalidConfig("adam epsilon must be > 0".into()));
        }
        Ok(())
    }
}

/// First and second moment estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamMoments<T> {
    pub first: Vec<T>,
    pub second: Vec<T>,
}

impl<T: Real> AdamMoments<T> {
    pub fn zeros(len: usize) -> Self {
        Self {
            first: vec![T::zero(); len],
            second: vec![T::zero(); len],
        }
    }
}

/// One bias-corrected Adam update of `theta` in place; `step` counts from 1.
pub fn adam_step<T: Real>(
    theta: &mut [T],
    gradient: &[T],
    moments: &mut AdamMoments<T>,
    config: &AdamConfig<T>,
    step: u64,
) -> Result<()> {
    if step == 0 {
        return Err(VqeError::InvalidConfig("adam step index starts at 1".into()));
    }
    let len = theta.len();
    for other in [gradient.len(), moments.first.len(), moments.second.len()] {
        if other != len {
            return Err(VqeError::DimensionMismatch {
                expected: len,
                found: other,
            });
        }
    }
    if gradient.iter().any(|g| !g.is_finite()) {
        return Err(VqeError::NonFinite("gradient"));
    }
    let t = step.min(i32::MAX as u64) as i32;
    let c1 = T::one() - config.beta1.powi(t);
    let c2 = T::one() - config.beta2.powi(t);
    for i in 0..len {
        let g = gradient[i];
        let m = config.beta1 * moments.first[i] + (T::one() - config.beta1) * g;
        let v = config.beta2 * moments.second[i] + (T::one() - config.beta2) * g * g;
        moments.first[i] = m;
        moments.second[i] = v;
        let m_hat = m / c1;
        let v_hat = v / c2;
        theta[i] -= config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
    }
    Ok(())
}
