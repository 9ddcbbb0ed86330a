//! Config-driven experiments on top of `liewave-core`.
//!
//! `liewave run <config>` executes one experiment and writes `report.json`
//! plus CSV series into the configured output directory.
//! Exit codes: 0 all verdicts PASS, 1 some FAIL, 2 bad config or unusable
//! output directory, 3 numerical abort.

pub mod config;
pub mod experiments;
pub mod output;
pub mod presets;

use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use config::LoadedConfig;
use output::{Report, Status};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_ENV: &str = "LIEWAVE_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

macro_rules! numerical_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Numerical(e.to_string())
            }
        }
    )*};
}

numerical_from!(
    liewave_core::HarmonicError,
    liewave_core::group_spectra::SpecError,
    liewave_core::propagator::PropagatorError,
    liewave_core::evolution::EvolutionError,
    liewave_core::analysis::AnalysisError
);

/// Caps the global worker pool at `LIEWAVE_THREADS` when set. Returns the
/// requested count.
pub fn configure_threads() -> Option<usize> {
    let raw = std::env::var(THREADS_ENV).ok()?;
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("{THREADS_ENV}: {e}");
            }
            Some(n)
        }
        _ => {
            log::warn!("ignoring {THREADS_ENV}={raw:?}: expected a positive integer");
            None
        }
    }
}

/// Result of a completed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub report: Report,
    pub output_dir: PathBuf,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }
}

fn output_dir(cfg: &LoadedConfig) -> PathBuf {
    cfg.config.output.directory.clone()
}

/// Runs an already loaded config. Numerical failures still produce a report
/// (status `abort`); config and IO problems are returned as errors.
pub fn run_loaded(cfg: &LoadedConfig) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let dir = output_dir(cfg);
    let outcome = match experiments::run(cfg) {
        Ok(o) => o,
        Err(CliError::Numerical(msg)) => experiments::Outcome {
            abort: Some(msg.clone()),
            diagnostic: Some(msg),
            ..Default::default()
        },
        Err(e) => return Err(e),
    };
    let files = output::write_artifacts(&cfg.config.output, &dir, &outcome.artifacts)?;
    let status = if outcome.abort.is_some() {
        Status::Abort
    } else if outcome.all_pass() {
        Status::Pass
    } else {
        Status::Fail
    };
    let report = Report {
        experiment: cfg.config.experiment.name().to_string(),
        status,
        exit_code: status.exit_code(),
        verdicts: outcome.verdicts,
        diagnostic: outcome.diagnostic,
        results: outcome.results,
        files,
        core_version: liewave_core::VERSION,
        cli_version: VERSION,
        threads: rayon::current_num_threads(),
        wall_time_s: start.elapsed().as_secs_f64(),
        config: cfg.config.clone(),
    };
    if cfg.config.output.json() {
        output::write_report(&dir, &report)?;
    }
    Ok(RunSummary { report, output_dir: dir })
}

pub fn run(path: &Path) -> Result<RunSummary, CliError> {
    let cfg = config::load(path)?;
    run_loaded(&cfg)
}

/// Text listing of the data presets and experiments.
pub fn presets_listing() -> String {
    let mut s = String::from("data presets ([data] u0 / u1, key `preset`):\n");
    for (name, what) in config::Preset::describe_all() {
        s.push_str(&format!("  {name:<14} {what}\n"));
    }
    s.push_str("experiments (top-level `experiment`):\n");
    for e in config::Experiment::ALL {
        s.push_str(&format!("  {}\n", e.name()));
    }
    s
}
