//! Experiment configuration: TOML with dotted keys, e.g.
//!
//! ```toml
//! qubits = 6
//! depth = 10
//! optimizer.boa.n_s = 10
//! ```
//!
//! Every field except `qubits` and `depth` has a default. Exactly one of
//! `optimizer.boa` and `optimizer.adam` may be present; the Bees Algorithm is
//! used when neither is.

use std::path::{Path, PathBuf};

use hive_vqe::optim::{AdamConfig, AdamRun, BoaConfig, Interval, PatchShrink};
use hive_vqe::pauli::{MAX_QUBITS, MIN_QUBITS};
use hive_vqe::{Boundary, Method64};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_FIELD: f64 = 1.1;
pub const DEFAULT_MAX_ITERATIONS: usize = 300;
pub const DEFAULT_TARGET: f64 = 1e-6;
pub const DEFAULT_OUTPUT_DIR: &str = "runs";

/// Bees Algorithm keys under `optimizer.boa`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoaFile {
    pub n_s: Option<usize>,
    pub n_b: Option<usize>,
    pub n_e: Option<usize>,
    pub n_re: Option<usize>,
    pub n_rb: Option<usize>,
    pub st_lim: Option<usize>,
    pub ngh0: Option<f64>,
    pub shrink: Option<f64>,
    pub shrink_policy: Option<PatchShrink>,
    pub refresh_scouts: Option<bool>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// Adam keys under `optimizer.adam`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdamFile {
    pub lr: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub eps: Option<f64>,
    pub restarts: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boa: Option<BoaFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adam: Option<AdamFile>,
}

/// The config file as written, before defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: Option<u32>,
    pub qubits: Option<usize>,
    pub depth: Option<usize>,
    pub h: Option<f64>,
    pub boundary: Option<Boundary>,
    pub seed: Option<u64>,
    pub max_iterations: Option<usize>,
    pub target: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub record_wall_time: Option<bool>,
    pub optimizer: Option<OptimizerFile>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let path = unknown_key(&message).unwrap_or_else(|| "<document>".into());
            HarnessError::config(path, message)
        })
    }
}

/// Extracts the key name from serde's "unknown field `x`" and "missing field `x`" messages.
fn unknown_key(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}

/// Which optimizer a run uses.
#[derive(Clone, Debug, PartialEq)]
pub enum OptimizerChoice {
    Boa(BoaConfig<f64>),
    Adam(AdamRun<f64>),
}

impl OptimizerChoice {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Boa(_) => "boa",
            Self::Adam(_) => "adam",
        }
    }

    pub fn method(&self) -> Method64 {
        match self {
            Self::Boa(c) => Method64::Boa(c.clone()),
            Self::Adam(a) => Method64::Adam(a.clone()),
        }
    }

    /// Fully populated file section for this choice.
    pub fn to_file(&self) -> OptimizerFile {
        match self {
            Self::Boa(c) => OptimizerFile {
                boa: Some(BoaFile {
                    n_s: Some(c.scouts),
                    n_b: Some(c.selected_sites),
                    n_e: Some(c.elite_sites),
                    n_re: Some(c.elite_recruits),
                    n_rb: Some(c.selected_recruits),
                    st_lim: Some(c.stagnation_limit),
                    ngh0: Some(c.initial_patch_width),
                    shrink: Some(c.shrink_factor),
                    shrink_policy: Some(c.shrink_policy),
                    refresh_scouts: Some(c.refresh_scouts),
                    lower: Some(c.bounds.lower),
                    upper: Some(c.bounds.upper),
                }),
                adam: None,
            },
            Self::Adam(a) => OptimizerFile {
                boa: None,
                adam: Some(AdamFile {
                    lr: Some(a.config.learning_rate),
                    beta1: Some(a.config.beta1),
                    beta2: Some(a.config.beta2),
                    eps: Some(a.config.epsilon),
                    restarts: Some(a.restarts),
                }),
            },
        }
    }
}

/// A validated run configuration with all defaults applied.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub qubits: usize,
    pub depth: usize,
    pub h: f64,
    pub boundary: Boundary,
    pub seed: u64,
    pub max_iterations: usize,
    pub target: f64,
    pub output_dir: PathBuf,
    pub record_wall_time: bool,
    pub optimizer: OptimizerChoice,
}

impl ExperimentConfig {
    /// Defaults for everything but the circuit size.
    pub fn new(qubits: usize, depth: usize) -> Self {
        Self {
            qubits,
            depth,
            h: DEFAULT_FIELD,
            boundary: Boundary::Closed,
            seed: 0,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            target: DEFAULT_TARGET,
            output_dir: PathBuf::from(DEFAULT_OUTPUT_DIR),
            record_wall_time: false,
            optimizer: OptimizerChoice::Boa(BoaConfig::default()),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_file(&ConfigFile::parse(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn from_file(file: &ConfigFile) -> Result<Self> {
        if let Some(v) = file.schema_version {
            if v != SCHEMA_VERSION {
                return Err(HarnessError::config(
                    "schema_version",
                    format!("unsupported version {v} (this build reads {SCHEMA_VERSION})"),
                ));
            }
        }
        let qubits = file
            .qubits
            .ok_or_else(|| HarnessError::config("qubits", "required"))?;
        let depth = file
            .depth
            .ok_or_else(|| HarnessError::config("depth", "required"))?;
        let mut cfg = Self::new(qubits, depth);
        if let Some(h) = file.h {
            cfg.h = h;
        }
        if let Some(b) = file.boundary {
            cfg.boundary = b;
        }
        if let Some(s) = file.seed {
            cfg.seed = s;
        }
        if let Some(m) = file.max_iterations {
            cfg.max_iterations = m;
        }
        if let Some(t) = file.target {
            cfg.target = t;
        }
        if let Some(d) = &file.output_dir {
            cfg.output_dir = d.clone();
        }
        if let Some(w) = file.record_wall_time {
            cfg.record_wall_time = w;
        }
        if let Some(opt) = &file.optimizer {
            cfg.optimizer = optimizer_from_file(opt)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&self.qubits) {
            return Err(HarnessError::config(
                "qubits",
                format!("must lie in {MIN_QUBITS}..={MAX_QUBITS}, got {}", self.qubits),
            ));
        }
        if self.depth == 0 {
            return Err(HarnessError::config("depth", "must be >= 1"));
        }
        if !self.h.is_finite() {
            return Err(HarnessError::config("h", "must be finite"));
        }
        if self.max_iterations == 0 {
            return Err(HarnessError::config("max_iterations", "must be >= 1"));
        }
        if !(self.target > 0.0 && self.target.is_finite()) {
            return Err(HarnessError::config("target", "must be finite and > 0"));
        }
        validate_optimizer(&self.optimizer)
    }

    /// Fully populated file form, used as the config snapshot in artifacts.
    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            schema_version: Some(SCHEMA_VERSION),
            qubits: Some(self.qubits),
            depth: Some(self.depth),
            h: Some(self.h),
            boundary: Some(self.boundary),
            seed: Some(self.seed),
            max_iterations: Some(self.max_iterations),
            target: Some(self.target),
            output_dir: Some(self.output_dir.clone()),
            record_wall_time: Some(self.record_wall_time),
            optimizer: Some(self.optimizer.to_file()),
        }
    }
}

pub(crate) fn optimizer_from_file(opt: &OptimizerFile) -> Result<OptimizerChoice> {
    match (&opt.boa, &opt.adam) {
        (Some(_), Some(_)) => Err(HarnessError::config(
            "optimizer",
            "give either optimizer.boa or optimizer.adam, not both",
        )),
        (Some(b), None) => Ok(OptimizerChoice::Boa(boa_from_file(b)?)),
        (None, Some(a)) => Ok(OptimizerChoice::Adam(adam_from_file(a))),
        (None, None) => Ok(OptimizerChoice::Boa(BoaConfig::default())),
    }
}

pub(crate) fn boa_from_file(b: &BoaFile) -> Result<BoaConfig<f64>> {
    let d = BoaConfig::<f64>::default();
    let lower = b.lower.unwrap_or(d.bounds.lower);
    let upper = b.upper.unwrap_or(d.bounds.upper);
    let bounds = Interval::new(lower, upper)
        .map_err(|e| HarnessError::config("optimizer.boa.lower", e.to_string()))?;
    Ok(BoaConfig {
        scouts: b.n_s.unwrap_or(d.scouts),
        selected_sites: b.n_b.unwrap_or(d.selected_sites),
        elite_sites: b.n_e.unwrap_or(d.elite_sites),
        elite_recruits: b.n_re.unwrap_or(d.elite_recruits),
        selected_recruits: b.n_rb.unwrap_or(d.selected_recruits),
        stagnation_limit: b.st_lim.unwrap_or(d.stagnation_limit),
        initial_patch_width: b.ngh0.unwrap_or(d.initial_patch_width),
        shrink_factor: b.shrink.unwrap_or(d.shrink_factor),
        shrink_policy: b.shrink_policy.unwrap_or(d.shrink_policy),
        bounds,
        refresh_scouts: b.refresh_scouts.unwrap_or(d.refresh_scouts),
        parallel: true,
    })
}

pub(crate) fn adam_from_file(a: &AdamFile) -> AdamRun<f64> {
    let d = AdamRun::<f64>::default();
    AdamRun {
        config: AdamConfig {
            learning_rate: a.lr.unwrap_or(d.config.learning_rate),
            beta1: a.beta1.unwrap_or(d.config.beta1),
            beta2: a.beta2.unwrap_or(d.config.beta2),
            epsilon: a.eps.unwrap_or(d.config.epsilon),
        },
        restarts: a.restarts.unwrap_or(d.restarts),
        init_bounds: d.init_bounds,
    }
}

pub(crate) fn validate_optimizer(opt: &OptimizerChoice) -> Result<()> {
    let bad = |key: &str, msg: &str| Err(HarnessError::config(key, msg));
    match opt {
        OptimizerChoice::Boa(c) => {
            let p = "optimizer.boa";
            if c.elite_sites < 1 {
                return bad(&format!("{p}.n_e"), "must be >= 1");
            }
            if c.elite_sites > c.selected_sites {
                return bad(&format!("{p}.n_e"), "must not exceed n_b");
            }
            if c.selected_sites > c.scouts {
                return bad(&format!("{p}.n_b"), "must not exceed n_s");
            }
            if c.selected_recruits < 1 {
                return bad(&format!("{p}.n_rb"), "must be >= 1");
            }
            if c.elite_recruits < c.selected_recruits {
                return bad(&format!("{p}.n_re"), "must be >= n_rb");
            }
            if c.stagnation_limit < 1 {
                return bad(&format!("{p}.st_lim"), "must be >= 1");
            }
            if !(c.initial_patch_width > 0.0 && c.initial_patch_width <= std::f64::consts::PI) {
                return bad(&format!("{p}.ngh0"), "must lie in (0, pi]");
            }
            if !(c.shrink_factor > 0.0 && c.shrink_factor <= 1.0) {
                return bad(&format!("{p}.shrink"), "must lie in (0, 1]");
            }
            c.validate().map_err(|e| HarnessError::config(p, e.to_string()))
        }
        OptimizerChoice::Adam(a) => {
            let p = "optimizer.adam";
            let c = &a.config;
            if !(c.learning_rate > 0.0 && c.learning_rate.is_finite()) {
                return bad(&format!("{p}.lr"), "must be finite and > 0");
            }
            if !(0.0..1.0).contains(&c.beta1) {
                return bad(&format!("{p}.beta1"), "must lie in [0, 1)");
            }
            if !(0.0..1.0).contains(&c.beta2) {
                return bad(&format!("{p}.beta2"), "must lie in [0, 1)");
            }
            if !(c.epsilon > 0.0) {
                return bad(&format!("{p}.eps"), "must be > 0");
            }
            if a.restarts == 0 {
                return bad(&format!("{p}.restarts"), "must be >= 1");
            }
            c.validate().map_err(|e| HarnessError::config(p, e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_only_config_takes_every_default() {
        let cfg = ExperimentConfig::from_toml("qubits = 4\ndepth = 4\n").unwrap();
        assert_eq!(cfg, ExperimentConfig::new(4, 4));
        assert_eq!(cfg.h, 1.1);
        assert_eq!(cfg.boundary, Boundary::Closed);
        assert_eq!(cfg.max_iterations, 300);
        assert_eq!(cfg.target, 1e-6);
        assert_eq!(cfg.optimizer.name(), "boa");
    }

    #[test]
    fn dotted_keys_reach_the_optimizer() {
        let cfg = ExperimentConfig::from_toml(
            "qubits = 6\ndepth = 10\nboundary = \"open\"\noptimizer.boa.n_s = 12\noptimizer.boa.shrink = 0.9\n",
        )
        .unwrap();
        match cfg.optimizer {
            OptimizerChoice::Boa(c) => {
                assert_eq!(c.scouts, 12);
                assert_eq!(c.shrink_factor, 0.9);
                assert_eq!(c.selected_sites, 5);
            }
            _ => panic!("expected boa"),
        }
        let cfg = ExperimentConfig::from_toml(
            "qubits = 8\ndepth = 14\noptimizer.adam.lr = 0.05\noptimizer.adam.restarts = 3\n",
        )
        .unwrap();
        match cfg.optimizer {
            OptimizerChoice::Adam(a) => {
                assert_eq!(a.config.learning_rate, 0.05);
                assert_eq!(a.restarts, 3);
                assert_eq!(a.config.beta2, 0.999);
            }
            _ => panic!("expected adam"),
        }
    }

    fn path_of(text: &str) -> String {
        match ExperimentConfig::from_toml(text).unwrap_err() {
            HarnessError::Config { path, .. } => path,
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn errors_name_the_offending_field() {
        assert_eq!(path_of("depth = 4\n"), "qubits");
        assert_eq!(path_of("qubits = 13\ndepth = 4\n"), "qubits");
        assert_eq!(path_of("qubits = 4\ndepth = 0\n"), "depth");
        assert_eq!(path_of("qubits = 4\ndepth = 4\ntarget = 0.0\n"), "target");
        assert_eq!(path_of("qubits = 4\ndepth = 4\noptimizer.boa.n_e = 6\n"), "optimizer.boa.n_e");
        assert_eq!(path_of("qubits = 4\ndepth = 4\noptimizer.boa.ngh0 = 4.0\n"), "optimizer.boa.ngh0");
        assert_eq!(path_of("qubits = 4\ndepth = 4\noptimizer.adam.beta1 = 1.0\n"), "optimizer.adam.beta1");
        assert_eq!(path_of("qubits = 4\ndepth = 4\nschema_version = 9\n"), "schema_version");
        assert_eq!(path_of("qubits = 4\ndepth = 4\nbogus = 1\n"), "bogus");
        assert_eq!(
            path_of("qubits = 4\ndepth = 4\noptimizer.boa.n_s = 10\noptimizer.adam.lr = 0.1\n"),
            "optimizer"
        );
    }

    #[test]
    fn snapshot_round_trips() {
        let cfg = ExperimentConfig::from_toml(
            "qubits = 6\ndepth = 10\nseed = 7\noptimizer.adam.lr = 0.02\n",
        )
        .unwrap();
        let text = toml::to_string(&cfg.to_file()).unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
    }
}
