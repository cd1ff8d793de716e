use std::time::Instant;

use hive_vqe::optim::{run_optimization, RunSettings};
use hive_vqe::pauli::TfimSpec;
use hive_vqe::{build_tfim, exact_ground_energy, HvaCircuit, Termination, VqeObjective64};

use crate::artifact::{canonical_record, RunArtifact};
use crate::config::ExperimentConfig;
use crate::error::{exit, Result};
use crate::format::canonical;

/// Ground energy, circuit and objective for a configuration.
pub struct Problem {
    pub ground_energy: f64,
    pub objective: VqeObjective64,
}

impl Problem {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let spec = TfimSpec::new(cfg.qubits, cfg.h, cfg.boundary)?;
        let ground_energy = exact_ground_energy(&spec)?;
        let circuit = HvaCircuit::new(cfg.qubits, cfg.depth, cfg.boundary)?;
        let objective = VqeObjective64::new(circuit, build_tfim(&spec))?;
        Ok(Self {
            ground_energy,
            objective,
        })
    }

    pub fn circuit(&self) -> &HvaCircuit {
        self.objective.circuit()
    }
}

/// Runs the configured optimizer to completion. Nothing is written to disk.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunArtifact> {
    cfg.validate()?;
    let problem = Problem::new(cfg)?;
    let settings = RunSettings {
        max_iterations: cfg.max_iterations,
        target: cfg.target,
        reference: problem.ground_energy,
        record_wall_time: cfg.record_wall_time,
    };
    let start = Instant::now();
    let outcome = run_optimization(&problem.objective, &cfg.optimizer.method(), cfg.seed, &settings)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let trace: Vec<_> = outcome.trace.records.iter().map(canonical_record).collect();
    Ok(RunArtifact {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.to_file(),
        optimizer: cfg.optimizer.name().to_string(),
        ground_energy: problem.ground_energy,
        termination: outcome.trace.termination,
        iterations: trace.last().map_or(0, |r| r.iteration),
        evaluations: trace.last().map_or(0, |r| r.evaluations),
        best_energy: canonical(outcome.best_value),
        best_parameters: outcome.best_parameters,
        realization: outcome.realization,
        wall_clock_ms: cfg.record_wall_time.then_some(elapsed),
        trace,
    })
}

/// Exit code for a finished run: 0 on target, 4 on budget exhaustion, 3 on divergence.
pub fn exit_code(artifact: &RunArtifact) -> i32 {
    match artifact.termination {
        Termination::TargetReached => exit::OK,
        Termination::MaxIterations => exit::TARGET_NOT_REACHED,
        Termination::Diverged => exit::NUMERIC,
    }
}
