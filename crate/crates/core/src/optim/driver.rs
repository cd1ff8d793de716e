use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::adam::{adam_step, AdamConfig, AdamMoments};
use super::boa::{boa_cycle, boa_init, BoaConfig};
use super::rng::child_rng;
use super::Interval;
use crate::ansatz::uniform_in;
use crate::error::{Result, VqeError};
use crate::loss::{Counted, Objective};
use crate::scalar::Real;

const TAG_ADAM: u64 = 16;

/// Adam baseline: best of `restarts` independent realizations, each started
/// uniformly inside `init_bounds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamRun<T> {
    pub config: AdamConfig<T>,
    pub restarts: usize,
    pub init_bounds: Interval<T>,
}

impl<T: Real> Default for AdamRun<T> {
    fn default() -> Self {
        Self {
            config: AdamConfig::default(),
            restarts: 30,
            init_bounds: Interval::angles(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Method<T> {
    Boa(BoaConfig<T>),
    Adam(AdamRun<T>),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSettings<T> {
    pub max_iterations: usize,
    /// Success threshold on `|E - reference|`.
    pub target: T,
    /// Reference energy, normally the exact ground energy.
    pub reference: T,
    /// Fill `wall_ms`; when false it stays 0 so traces are reproducible byte for byte.
    pub record_wall_time: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    TargetReached,
    MaxIterations,
    Diverged,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord<T> {
    pub iteration: u64,
    pub best_energy: T,
    pub abs_error: T,
    pub evaluations: u64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace<T> {
    pub records: Vec<TraceRecord<T>>,
    pub termination: Termination,
}

impl<T: Real> ConvergenceTrace<T> {
    /// First iteration whose error is at or below `target`.
    pub fn iterations_to(&self, target: T) -> Option<u64> {
        self.records
            .iter()
            .find(|r| r.abs_error <= target)
            .map(|r| r.iteration)
    }

    pub fn final_error(&self) -> Option<T> {
        self.records.last().map(|r| r.abs_error)
    }

    pub fn min_error(&self) -> Option<T> {
        self.records.iter().map(|r| r.abs_error).reduce(T::min)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome<T> {
    pub trace: ConvergenceTrace<T>,
    pub best_parameters: Vec<T>,
    pub best_value: T,
    /// Index of the reported realization (always 0 for the Bees Algorithm).
    pub realization: usize,
}

struct Recorder<T> {
    start: Instant,
    settings: RunSettings<T>,
    records: Vec<TraceRecord<T>>,
}

impl<T: Real> Recorder<T> {
    fn new(settings: RunSettings<T>) -> Self {
        Self {
            start: Instant::now(),
            settings,
            records: Vec::new(),
        }
    }

    /// Returns true once the target is met.
    fn push(&mut self, energy: T, evaluations: u64) -> bool {
        let abs_error = (energy - self.settings.reference).abs();
        let wall_ms = if self.settings.record_wall_time {
            self.start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        };
        self.records.push(TraceRecord {
            iteration: self.records.len() as u64 + 1,
            best_energy: energy,
            abs_error,
            evaluations,
            wall_ms,
        });
        abs_error <= self.settings.target
    }

    fn finish(self, termination: Termination) -> ConvergenceTrace<T> {
        ConvergenceTrace {
            records: self.records,
            termination,
        }
    }
}

/// Minimizes `objective` until `|E - reference| <= target` or the iteration
/// budget runs out. One Bees iteration is one cycle; one Adam iteration is
/// one gradient step.
pub fn run_optimization<T: Real, O: Objective<T> + ?Sized>(
    objective: &O,
    method: &Method<T>,
    seed: u64,
    settings: &RunSettings<T>,
) -> Result<RunOutcome<T>> {
    if settings.max_iterations == 0 {
        return Err(VqeError::InvalidConfig("max_iterations must be >= 1".into()));
    }
    if !(settings.target > T::zero()) {
        return Err(VqeError::InvalidConfig("target must be > 0".into()));
    }
    if !settings.reference.is_finite() {
        return Err(VqeError::NonFinite("reference energy"));
    }
    match method {
        Method::Boa(config) => run_boa(objective, config, seed, settings),
        Method::Adam(run) => run_adam(objective, run, seed, settings),
    }
}

fn run_boa<T: Real, O: Objective<T> + ?Sized>(
    objective: &O,
    config: &BoaConfig<T>,
    seed: u64,
    settings: &RunSettings<T>,
) -> Result<RunOutcome<T>> {
    let counted = Counted::new(objective);
    let mut recorder = Recorder::new(*settings);
    let mut state = boa_init(config, &counted, seed)?;
    let mut termination = Termination::MaxIterations;
    for _ in 0..settings.max_iterations {
        boa_cycle(&mut state, config, &counted)?;
        if recorder.push(state.best_fitness, counted.evaluations()) {
            termination = Termination::TargetReached;
            break;
        }
    }
    Ok(RunOutcome {
        trace: recorder.finish(termination),
        best_parameters: state.best_position,
        best_value: state.best_fitness,
        realization: 0,
    })
}

fn run_adam<T: Real, O: Objective<T> + ?Sized>(
    objective: &O,
    run: &AdamRun<T>,
    seed: u64,
    settings: &RunSettings<T>,
) -> Result<RunOutcome<T>> {
    run.config.validate()?;
    run.init_bounds.validate()?;
    if run.restarts == 0 {
        return Err(VqeError::InvalidConfig("adam restarts must be >= 1".into()));
    }
    let mut best: Option<RunOutcome<T>> = None;
    for r in 0..run.restarts {
        let outcome = adam_realization(objective, run, seed, r, settings)?;
        if best.as_ref().is_none_or(|b| better_realization(&outcome, b, settings.target)) {
            best = Some(outcome);
        }
    }
    Ok(best.expect("at least one realization"))
}

/// Ranks realizations: reaching the target beats not reaching it, then fewer
/// iterations to target, then smaller minimum error.
fn better_realization<T: Real>(a: &RunOutcome<T>, b: &RunOutcome<T>, target: T) -> bool {
    match (a.trace.iterations_to(target), b.trace.iterations_to(target)) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => {
            let ea = a.trace.min_error().unwrap_or(T::infinity());
            let eb = b.trace.min_error().unwrap_or(T::infinity());
            ea < eb
        }
    }
}

fn adam_realization<T: Real, O: Objective<T> + ?Sized>(
    objective: &O,
    run: &AdamRun<T>,
    seed: u64,
    realization: usize,
    settings: &RunSettings<T>,
) -> Result<RunOutcome<T>> {
    let counted = Counted::new(objective);
    let mut recorder = Recorder::new(*settings);
    let mut rng = child_rng(seed, &[TAG_ADAM, realization as u64]);
    let bounds = run.init_bounds;
    let mut theta: Vec<T> = (0..objective.dimension())
        .map(|_| uniform_in(bounds.lower, bounds.upper, &mut rng))
        .collect();
    let mut moments = AdamMoments::zeros(theta.len());
    let mut best_parameters = theta.clone();
    let mut best_value = T::infinity();
    let mut termination = Termination::MaxIterations;

    for step in 1..=settings.max_iterations as u64 {
        let (_, gradient) = counted.value_and_gradient(&theta)?;
        if gradient.iter().any(|g| !g.is_finite()) {
            termination = Termination::Diverged;
            break;
        }
        adam_step(&mut theta, &gradient, &mut moments, &run.config, step)?;
        let energy = counted.value(&theta)?;
        if !energy.is_finite() {
            termination = Termination::Diverged;
            break;
        }
        if energy < best_value {
            best_value = energy;
            best_parameters.clone_from(&theta);
        }
        if recorder.push(energy, counted.evaluations()) {
            termination = Termination::TargetReached;
            break;
        }
    }
    Ok(RunOutcome {
        trace: recorder.finish(termination),
        best_parameters,
        best_value,
        realization,
    })
}
