use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hive_vqe::pauli::TfimSpec;
use hive_vqe::{exact_ground_energy, Boundary};
use hive_vqe_harness::diagnose::{diagnose, ThetaSource};
use hive_vqe_harness::format::{g12, g15};
use hive_vqe_harness::plot::{load_curve, render_svg};
use hive_vqe_harness::runner::{execute, exit_code};
use hive_vqe_harness::sweep::{run_grid, Grid, SUMMARY_FILE};
use hive_vqe_harness::{exit, init_thread_pool, ExperimentConfig, HarnessError, Result};

#[derive(Parser)]
#[command(name = "hive-vqe", version, about = "VQE workbench for the transverse-field Ising chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact ground energy of the chain.
    Oracle {
        qubits: usize,
        h: f64,
        /// open, closed (or periodic)
        boundary: String,
    },
    /// Run one optimization and write trace.csv, theta.csv and run.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run a grid of cells, optimizers and seeds and write summary.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run cells one after another instead of on the worker pool.
        #[arg(long)]
        serial: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Write QFIM and Hessian matrices with their spectra.
    Diagnose {
        #[arg(long)]
        config: PathBuf,
        /// zeros, best-of-run, or a parameter file
        #[arg(long, default_value = "zeros")]
        theta: ThetaSource,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Draw error-versus-iteration curves from run directories or trace files.
    Plot {
        #[arg(required = true)]
        traces: Vec<PathBuf>,
        #[arg(long, default_value = "convergence.svg")]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        target: f64,
    },
}

fn load_config(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(o) = out {
        cfg.output_dir = o;
    }
    Ok(cfg)
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Oracle { qubits, h, boundary } => {
            let boundary: Boundary = boundary
                .parse()
                .map_err(|e: hive_vqe::VqeError| HarnessError::Usage(e.to_string()))?;
            let spec = TfimSpec::new(qubits, h, boundary)?;
            println!("{}", g12(exact_ground_energy(&spec)?));
            Ok(exit::OK)
        }
        Command::Run { config, seed, out, format: Format::Csv } => {
            let cfg = load_config(&config, seed, out)?;
            let artifact = execute(&cfg)?;
            artifact.write_dir(&cfg.output_dir)?;
            let last = artifact.trace.last();
            eprintln!(
                "{} n={} L={} seed={}: {:?} after {} iterations, |E - E_gs| = {} -> {}",
                cfg.optimizer.name(),
                cfg.qubits,
                cfg.depth,
                cfg.seed,
                artifact.termination,
                artifact.iterations,
                last.map_or("n/a".into(), |r| g15(r.abs_error)),
                cfg.output_dir.display()
            );
            Ok(exit_code(&artifact))
        }
        Command::Sweep { config, out, serial, format: Format::Csv } => {
            let grid = Grid::load(&config, out.as_deref())?;
            let (_, rows) = run_grid(&grid, serial)?;
            for r in &rows {
                eprintln!(
                    "n={} L={} {}: {}/{} reached target, median iterations {}",
                    r.qubits,
                    r.depth,
                    r.optimizer,
                    r.successes,
                    r.runs,
                    g15(r.median_iterations)
                );
            }
            eprintln!("wrote {}", grid.output_dir.join(SUMMARY_FILE).display());
            Ok(exit::OK)
        }
        Command::Diagnose { config, theta, seed, out, format: Format::Csv } => {
            let cfg = load_config(&config, seed, None)?;
            let report = diagnose(&cfg, &theta)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.join("diagnose"));
            report.write_dir(&dir)?;
            eprintln!(
                "qfim rank {}/{}, hessian min eigenvalue {} -> {}",
                report.qfim_spectrum.rank,
                report.theta.len(),
                report.hessian_spectrum.eigenvalues.first().map_or("n/a".into(), |v| g15(*v)),
                dir.display()
            );
            Ok(exit::OK)
        }
        Command::Plot { traces, out, target } => {
            let curves = traces.iter().map(|p| load_curve(p)).collect::<Result<Vec<_>>>()?;
            let svg = render_svg(&curves, target)?;
            hive_vqe_harness::artifact::write_text(&out, &svg)?;
            eprintln!("wrote {}", out.display());
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    let code = init_thread_pool().and_then(|_| dispatch(cli.command)).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
