use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hive_vqe::diagnostics::{
    hessian, qfim, spectrum_report, SpectrumReport, HESSIAN_RANK_TOLERANCE, HESSIAN_STEP,
};
use hive_vqe::statevector::StateVector;
use hive_vqe::{HessianMatrix64, QfimMatrix64, VqeError};

use crate::artifact::{matrix_to_csv, read_theta, write_text};
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::format::g15;
use crate::runner::{execute, Problem};

pub const QFIM_FILE: &str = "qfim.csv";
pub const HESSIAN_FILE: &str = "hessian.csv";
pub const SPECTRUM_FILE: &str = "spectrum.txt";

/// Where the evaluation point comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum ThetaSource {
    Zeros,
    /// Run the configured optimizer and take its best parameters.
    BestOfRun,
    File(PathBuf),
}

impl FromStr for ThetaSource {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "zeros" => Self::Zeros,
            "best-of-run" => Self::BestOfRun,
            path => Self::File(PathBuf::from(path)),
        })
    }
}

impl std::fmt::Display for ThetaSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Zeros => f.write_str("zeros"),
            Self::BestOfRun => f.write_str("best-of-run"),
            Self::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiagnoseReport {
    pub source: ThetaSource,
    pub theta: Vec<f64>,
    pub qfim: QfimMatrix64,
    pub qfim_spectrum: SpectrumReport<f64>,
    pub hessian: HessianMatrix64,
    pub hessian_spectrum: SpectrumReport<f64>,
}

pub fn resolve_theta(cfg: &ExperimentConfig, source: &ThetaSource) -> Result<Vec<f64>> {
    let m = 2 * cfg.depth;
    let theta = match source {
        ThetaSource::Zeros => vec![0.0; m],
        ThetaSource::BestOfRun => execute(cfg)?.best_parameters,
        ThetaSource::File(p) => read_theta(p)?,
    };
    if theta.len() != m {
        return Err(HarnessError::Numeric(VqeError::ParameterLength {
            expected: m,
            found: theta.len(),
        }));
    }
    Ok(theta)
}

pub fn diagnose(cfg: &ExperimentConfig, source: &ThetaSource) -> Result<DiagnoseReport> {
    cfg.validate()?;
    let theta = resolve_theta(cfg, source)?;
    let problem = Problem::new(cfg)?;
    let circuit = problem.circuit();
    let base = StateVector::plus_state(cfg.qubits)?;
    let f = qfim(circuit, &theta, &base)?;
    let qfim_spectrum = spectrum_report(&f.matrix, f.rank_tolerance)?;
    let h = hessian(circuit, &theta, problem.objective.hamiltonian(), HESSIAN_STEP)?;
    let hessian_spectrum = spectrum_report(&h.matrix, HESSIAN_RANK_TOLERANCE)?;
    Ok(DiagnoseReport {
        source: source.clone(),
        theta,
        qfim: f,
        qfim_spectrum,
        hessian: h,
        hessian_spectrum,
    })
}

impl DiagnoseReport {
    pub fn spectrum_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "theta_source {}", self.source);
        let _ = writeln!(s, "parameters {}", self.theta.len());
        let _ = writeln!(s, "\n[qfim]");
        let _ = writeln!(s, "rank_tolerance {}", g15(self.qfim.rank_tolerance));
        section(&mut s, &self.qfim_spectrum);
        let _ = writeln!(s, "\n[hessian]");
        let _ = writeln!(s, "fd_step {}", g15(self.hessian.fd_step));
        let _ = writeln!(s, "raw_asymmetry {}", g15(self.hessian.raw_asymmetry));
        let _ = writeln!(s, "rank_tolerance {}", g15(HESSIAN_RANK_TOLERANCE));
        section(&mut s, &self.hessian_spectrum);
        s
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let m = self.theta.len();
        write_text(&dir.join(QFIM_FILE), &matrix_to_csv(m, self.qfim.matrix.as_slice()))?;
        write_text(&dir.join(HESSIAN_FILE), &matrix_to_csv(m, self.hessian.matrix.as_slice()))?;
        write_text(&dir.join(SPECTRUM_FILE), &self.spectrum_text())
    }
}

fn section(s: &mut String, r: &SpectrumReport<f64>) {
    let _ = writeln!(s, "rank {}", r.rank);
    let _ = writeln!(s, "zero_count {}", r.zero_count);
    let _ = writeln!(s, "positive_count {}", r.positive_count);
    let _ = writeln!(s, "negative_count {}", r.negative_count);
    if let (Some(lo), Some(hi)) = (r.eigenvalues.first(), r.eigenvalues.last()) {
        let _ = writeln!(s, "min_eigenvalue {}", g15(*lo));
        let _ = writeln!(s, "max_eigenvalue {}", g15(*hi));
    }
    let _ = writeln!(s, "eigenvalues");
    for v in &r.eigenvalues {
        let _ = writeln!(s, "{}", g15(*v));
    }
}
