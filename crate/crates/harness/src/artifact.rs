//! Run artifacts and their on-disk forms: `trace.csv`, `theta.csv`, `run.json`.

use std::fs;
use std::path::{Path, PathBuf};

use hive_vqe::{Termination, TraceRecord64};
use serde::{Deserialize, Serialize};

use crate::config::ConfigFile;
use crate::error::{HarnessError, Result};
use crate::format::{canonical, g15};

pub const TRACE_HEADER: &str = "iteration,best_energy,abs_error,evaluations,wall_ms";
pub const THETA_HEADER: &str = "index,value";
pub const TRACE_FILE: &str = "trace.csv";
pub const THETA_FILE: &str = "theta.csv";
pub const RUN_FILE: &str = "run.json";

/// Everything a run produced. Float fields of the trace are stored already
/// rounded to the 15 significant digits the CSV carries, so
/// artifact -> CSV -> parse reproduces the trace exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub version: String,
    pub config: ConfigFile,
    pub optimizer: String,
    pub ground_energy: f64,
    pub termination: Termination,
    pub iterations: u64,
    pub evaluations: u64,
    pub best_energy: f64,
    pub best_parameters: Vec<f64>,
    /// Adam restart that produced the reported trace; 0 for the Bees Algorithm.
    pub realization: usize,
    /// Only filled when `record_wall_time` is set, so artifacts stay reproducible.
    pub wall_clock_ms: Option<f64>,
    pub trace: Vec<TraceRecord64>,
}

impl RunArtifact {
    pub fn reached_target(&self) -> bool {
        self.termination == Termination::TargetReached
    }

    /// First iteration at or below `target`.
    pub fn iterations_to(&self, target: f64) -> Option<u64> {
        self.trace.iter().find(|r| r.abs_error <= target).map(|r| r.iteration)
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        write_text(&dir.join(TRACE_FILE), &trace_to_csv(&self.trace))?;
        write_text(&dir.join(THETA_FILE), &theta_to_csv(&self.best_parameters))?;
        let json = serde_json::to_string_pretty(self).expect("artifact serializes");
        write_text(&dir.join(RUN_FILE), &(json + "\n"))
    }

    pub fn read_dir(dir: &Path) -> Result<Self> {
        let path = dir.join(RUN_FILE);
        let text = read_text(&path)?;
        serde_json::from_str(&text).map_err(|e| HarnessError::parse(&path, e.to_string()))
    }
}

/// Rounds the float fields the CSV carries.
pub fn canonical_record(r: &TraceRecord64) -> TraceRecord64 {
    TraceRecord64 {
        iteration: r.iteration,
        best_energy: canonical(r.best_energy),
        abs_error: canonical(r.abs_error),
        evaluations: r.evaluations,
        wall_ms: canonical(r.wall_ms),
    }
}

pub fn trace_to_csv(records: &[TraceRecord64]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.iteration,
            g15(r.best_energy),
            g15(r.abs_error),
            r.evaluations,
            g15(r.wall_ms)
        ));
    }
    out
}

pub fn trace_from_csv(text: &str, origin: &Path) -> Result<Vec<TraceRecord64>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == TRACE_HEADER => {}
        _ => return Err(HarnessError::parse(origin, format!("expected header `{TRACE_HEADER}`"))),
    }
    let mut records = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |what: &str| HarnessError::parse(origin, format!("line {}: {what}", k + 2));
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 5 {
            return Err(bad("expected 5 fields"));
        }
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number `{s}`")));
        let int = |s: &str| s.parse::<u64>().map_err(|_| bad(&format!("bad integer `{s}`")));
        records.push(TraceRecord64 {
            iteration: int(fields[0])?,
            best_energy: float(fields[1])?,
            abs_error: float(fields[2])?,
            evaluations: int(fields[3])?,
            wall_ms: float(fields[4])?,
        });
    }
    Ok(records)
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRecord64>> {
    trace_from_csv(&read_text(path)?, path)
}

pub fn theta_to_csv(theta: &[f64]) -> String {
    let mut out = String::from(THETA_HEADER);
    out.push('\n');
    for (i, t) in theta.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", g15(*t)));
    }
    out
}

/// Reads a parameter file: either the `index,value` form written by `run`,
/// or bare values separated by commas, whitespace or newlines.
pub fn read_theta(path: &Path) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    let mut lines = text.lines().peekable();
    let indexed = lines.peek().is_some_and(|h| h.trim() == THETA_HEADER);
    if indexed {
        lines.next();
    }
    let mut out = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |s: &str| HarnessError::parse(path, format!("line {}: bad number `{s}`", k + 1));
        if indexed {
            let value = line.split(',').nth(1).ok_or_else(|| bad(line))?.trim();
            out.push(value.parse().map_err(|_| bad(value))?);
        } else {
            for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                out.push(tok.parse().map_err(|_| bad(tok))?);
            }
        }
    }
    if out.iter().any(|v: &f64| !v.is_finite()) {
        return Err(HarnessError::parse(path, "non-finite parameter"));
    }
    Ok(out)
}

/// Row-major matrix, one row per line.
pub fn matrix_to_csv(dim: usize, data: &[f64]) -> String {
    let mut out = String::new();
    for row in data.chunks(dim.max(1)) {
        let cells: Vec<String> = row.iter().map(|v| g15(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

/// Accepts a run directory or a `trace.csv` path.
pub fn trace_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join(TRACE_FILE)
    } else {
        p.to_path_buf()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_csv_has_the_fixed_header() {
        let csv = trace_to_csv(&[TraceRecord64 {
            iteration: 1,
            best_energy: -4.4,
            abs_error: 1.5e-7,
            evaluations: 70,
            wall_ms: 0.0,
        }]);
        assert_eq!(csv, "iteration,best_energy,abs_error,evaluations,wall_ms\n1,-4.4,1.5e-07,70,0\n");
    }

    #[test]
    fn rejects_foreign_headers() {
        assert!(trace_from_csv("a,b,c\n", Path::new("x")).is_err());
        assert!(trace_from_csv(&format!("{TRACE_HEADER}\n1,2,3\n"), Path::new("x")).is_err());
    }

    #[test]
    fn theta_files_in_both_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        write_text(&a, &theta_to_csv(&[0.5, -1.25, 3.0])).unwrap();
        assert_eq!(read_theta(&a).unwrap(), vec![0.5, -1.25, 3.0]);
        let b = dir.path().join("b.txt");
        write_text(&b, "0.1, 0.2\n0.3 0.4\n").unwrap();
        assert_eq!(read_theta(&b).unwrap(), vec![0.1, 0.2, 0.3, 0.4]);
        write_text(&b, "0.1, x\n").unwrap();
        assert!(read_theta(&b).is_err());
    }
}
