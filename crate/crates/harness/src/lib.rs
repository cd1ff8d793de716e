//! Experiment driver for the `hive-vqe` workbench: configuration, single runs,
//! seeded sweeps, landscape diagnostics and convergence plots. The `hive-vqe`
//! binary is a thin command-line layer over this library.

pub mod artifact;
pub mod config;
pub mod diagnose;
pub mod error;
pub mod format;
pub mod plot;
pub mod runner;
pub mod sweep;

pub use artifact::RunArtifact;
pub use config::{ExperimentConfig, OptimizerChoice};
pub use error::{exit, HarnessError, Result};

/// Environment variable that caps the worker pool.
pub const THREADS_ENV: &str = "HIVE_VQE_THREADS";

/// Sizes the global rayon pool from [`THREADS_ENV`]; unset leaves rayon's default.
pub fn init_thread_pool() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| HarnessError::config(THREADS_ENV, format!("expected a positive integer, got `{raw}`")))?;
    // A pool that already exists (tests, embedding) is left alone.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}
