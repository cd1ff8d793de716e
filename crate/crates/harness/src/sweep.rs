//! Seeded sweeps over `(qubits, depth) x optimizer x seed`.
//!
//! Each run writes into its own directory `n{q}_L{d}/{optimizer}/seed{s}`;
//! the coordinator writes `summary.csv` once every run has finished. A run
//! that fails numerically leaves an `error.txt` and counts as unsuccessful.

use std::path::{Path, PathBuf};

use hive_vqe::Boundary;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifact::{write_text, RunArtifact};
use crate::config::{
    adam_from_file, boa_from_file, ExperimentConfig, OptimizerChoice, OptimizerFile, SCHEMA_VERSION,
};
use crate::error::{HarnessError, Result};
use crate::format::g15;
use crate::runner::execute;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_HEADER: &str = "qubits,depth,optimizer,runs,successes,success_rate,median_iterations";
pub const ERROR_FILE: &str = "error.txt";

/// Grid file. `optimizer.boa` and `optimizer.adam` may both be given here;
/// they parameterize the respective optimizer wherever the grid uses it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub schema_version: Option<u32>,
    pub cells: Vec<(usize, usize)>,
    pub optimizers: Option<Vec<String>>,
    pub seeds: Option<Vec<u64>>,
    pub h: Option<f64>,
    pub boundary: Option<Boundary>,
    pub max_iterations: Option<usize>,
    pub target: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub record_wall_time: Option<bool>,
    pub optimizer: Option<OptimizerFile>,
}

/// One planned run.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannedRun {
    pub config: ExperimentConfig,
    pub dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub runs: Vec<PlannedRun>,
    pub output_dir: PathBuf,
}

impl Grid {
    pub fn from_toml(text: &str, out_override: Option<&Path>) -> Result<Self> {
        let file: GridFile = toml::from_str(text).map_err(|e| {
            HarnessError::config("<grid>", e.message().to_string())
        })?;
        Self::from_file(&file, out_override)
    }

    pub fn load(path: &Path, out_override: Option<&Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text, out_override)
    }

    pub fn from_file(file: &GridFile, out_override: Option<&Path>) -> Result<Self> {
        if let Some(v) = file.schema_version {
            if v != SCHEMA_VERSION {
                return Err(HarnessError::config("schema_version", format!("unsupported version {v}")));
            }
        }
        if file.cells.is_empty() {
            return Err(HarnessError::config("cells", "grid is empty"));
        }
        let names = file.optimizers.clone().unwrap_or_else(|| vec!["boa".into()]);
        if names.is_empty() {
            return Err(HarnessError::config("optimizers", "grid is empty"));
        }
        let seeds = file.seeds.clone().unwrap_or_else(|| vec![0]);
        if seeds.is_empty() {
            return Err(HarnessError::config("seeds", "grid is empty"));
        }
        let sections = file.optimizer.clone().unwrap_or_default();
        let mut choices = Vec::new();
        for name in &names {
            choices.push(match name.as_str() {
                "boa" => OptimizerChoice::Boa(boa_from_file(&sections.boa.clone().unwrap_or_default())?),
                "adam" => OptimizerChoice::Adam(adam_from_file(&sections.adam.clone().unwrap_or_default())),
                other => {
                    return Err(HarnessError::config(
                        "optimizers",
                        format!("unknown optimizer `{other}` (expected boa or adam)"),
                    ))
                }
            });
        }
        let output_dir = out_override
            .map(Path::to_path_buf)
            .or_else(|| file.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("sweep"));

        let mut runs = Vec::new();
        for (k, &(qubits, depth)) in file.cells.iter().enumerate() {
            for choice in &choices {
                for &seed in &seeds {
                    let relative = run_dir(qubits, depth, choice.name(), seed);
                    let dir = output_dir.join(&relative);
                    let mut cfg = ExperimentConfig::new(qubits, depth);
                    cfg.h = file.h.unwrap_or(cfg.h);
                    cfg.boundary = file.boundary.unwrap_or(cfg.boundary);
                    cfg.max_iterations = file.max_iterations.unwrap_or(cfg.max_iterations);
                    cfg.target = file.target.unwrap_or(cfg.target);
                    cfg.record_wall_time = file.record_wall_time.unwrap_or(false);
                    cfg.seed = seed;
                    cfg.optimizer = choice.clone();
                    // Relative to the sweep root so artifacts do not depend on where it lives.
                    cfg.output_dir = relative;
                    cfg.validate().map_err(|e| match e {
                        HarnessError::Config { path, message } => {
                            HarnessError::config(format!("cells[{k}].{path}"), message)
                        }
                        other => other,
                    })?;
                    runs.push(PlannedRun { config: cfg, dir });
                }
            }
        }
        Ok(Self { runs, output_dir })
    }
}

pub fn run_dir(qubits: usize, depth: usize, optimizer: &str, seed: u64) -> PathBuf {
    PathBuf::from(format!("n{qubits}_L{depth}")).join(optimizer).join(format!("seed{seed}"))
}

/// Result of one planned run: an artifact or the error text.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub planned: PlannedRun,
    pub outcome: std::result::Result<RunArtifact, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub qubits: usize,
    pub depth: usize,
    pub optimizer: String,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Median of iterations-to-target, failures counted as infinite.
    pub median_iterations: f64,
}

/// Runs every planned run (in parallel unless `serial`), writes the per-run
/// directories and `summary.csv`, and returns the summary rows.
pub fn run_grid(grid: &Grid, serial: bool) -> Result<(Vec<RunRecord>, Vec<SummaryRow>)> {
    let work = |p: &PlannedRun| -> Result<RunRecord> {
        let outcome = execute(&p.config).map_err(|e| e.to_string());
        match &outcome {
            Ok(artifact) => artifact.write_dir(&p.dir)?,
            Err(message) => {
                std::fs::create_dir_all(&p.dir).map_err(|e| HarnessError::io(&p.dir, e))?;
                write_text(&p.dir.join(ERROR_FILE), &format!("{message}\n"))?;
            }
        }
        Ok(RunRecord {
            planned: p.clone(),
            outcome,
        })
    };
    let records: Vec<RunRecord> = if serial {
        grid.runs.iter().map(work).collect::<Result<_>>()?
    } else {
        grid.runs.par_iter().map(work).collect::<Result<_>>()?
    };
    let rows = summarize(&records);
    std::fs::create_dir_all(&grid.output_dir).map_err(|e| HarnessError::io(&grid.output_dir, e))?;
    write_text(&grid.output_dir.join(SUMMARY_FILE), &summary_to_csv(&rows))?;
    Ok((records, rows))
}

pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut rows: Vec<(SummaryRow, Vec<f64>)> = Vec::new();
    for r in records {
        let c = &r.planned.config;
        let name = c.optimizer.name();
        let iterations = match &r.outcome {
            Ok(a) if a.reached_target() => a.iterations_to(c.target).map_or(f64::INFINITY, |i| i as f64),
            _ => f64::INFINITY,
        };
        let pos = rows
            .iter()
            .position(|(s, _)| s.qubits == c.qubits && s.depth == c.depth && s.optimizer == name);
        let idx = pos.unwrap_or_else(|| {
            rows.push((
                SummaryRow {
                    qubits: c.qubits,
                    depth: c.depth,
                    optimizer: name.to_string(),
                    runs: 0,
                    successes: 0,
                    success_rate: 0.0,
                    median_iterations: f64::INFINITY,
                },
                Vec::new(),
            ));
            rows.len() - 1
        });
        let (row, its) = &mut rows[idx];
        row.runs += 1;
        if iterations.is_finite() {
            row.successes += 1;
        }
        its.push(iterations);
    }
    rows.into_iter()
        .map(|(mut row, its)| {
            row.success_rate = row.successes as f64 / row.runs as f64;
            row.median_iterations = median(its);
            row
        })
        .collect()
}

/// Median with the usual midpoint for even counts; `inf` propagates.
pub fn median(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

pub fn summary_to_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.qubits,
            r.depth,
            r.optimizer,
            r.runs,
            r.successes,
            g15(r.success_rate),
            g15(r.median_iterations)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_counts_failures_as_infinite() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(vec![1.0, f64::INFINITY, f64::INFINITY]), f64::INFINITY);
        assert_eq!(median(vec![1.0, 2.0, f64::INFINITY]), 2.0);
    }

    #[test]
    fn grid_expands_in_order() {
        let g = Grid::from_toml(
            "cells = [[4, 4], [6, 10]]\noptimizers = [\"boa\", \"adam\"]\nseeds = [0, 1]\n",
            Some(Path::new("/tmp/x")),
        )
        .unwrap();
        assert_eq!(g.runs.len(), 8);
        assert_eq!(g.runs[0].dir, Path::new("/tmp/x/n4_L4/boa/seed0"));
        assert_eq!(g.runs[3].dir, Path::new("/tmp/x/n4_L4/adam/seed1"));
        assert_eq!(g.runs[7].config.qubits, 6);
    }

    #[test]
    fn empty_or_bad_grids_are_rejected() {
        assert!(Grid::from_toml("cells = []\n", None).is_err());
        assert!(Grid::from_toml("cells = [[4, 4]]\nseeds = []\n", None).is_err());
        assert!(Grid::from_toml("cells = [[4, 4]]\noptimizers = [\"sgd\"]\n", None).is_err());
        match Grid::from_toml("cells = [[4, 4], [13, 2]]\n", None).unwrap_err() {
            HarnessError::Config { path, .. } => assert_eq!(path, "cells[1].qubits"),
            other => panic!("{other}"),
        }
    }
}
