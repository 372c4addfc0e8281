//! Config-driven experiment runner behind the `splitkit` binary.
//!
//! Four commands share one config format (see [`config`]):
//!
//! - [`cmd_run`]: run each listed method, write a trace CSV and a JSON summary
//!   per run, and optionally a certificate report;
//! - [`cmd_sweep`]: run each method over a stepsize grid and tabulate outcomes;
//! - [`cmd_certify`]: evaluate descent certificates along recorded runs;
//! - [`cmd_flow`]: integrate the proximal point or Douglas–Rachford flow.
//!
//! Exit codes: 0 success, 1 config or contract error, 2 non-convergence or
//! failed certificate, 3 I/O error. Independent runs execute on a rayon pool
//! whose size is capped by the `SPLITKIT_THREADS` environment variable.

pub mod artifacts;
mod commands;
pub mod config;

use std::path::{Path, PathBuf};

pub use commands::{
    build_problem, cmd_certify, cmd_flow, cmd_run, cmd_sweep, resolve_stepsize, BuiltProblem, FlowSummary,
    RunSummary,
};
pub use config::{parse_config, ConfigError, ConfigErrors, ExperimentConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_NONCONVERGENCE: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SPLITKIT_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Config(ConfigErrors),
    #[error(transparent)]
    Contract(crate::Error),
    #[error("{0}")]
    Failed(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) | HarnessError::Contract(_) => EXIT_CONFIG,
            HarnessError::Failed(_) => EXIT_NONCONVERGENCE,
            HarnessError::Io(_) => EXIT_IO,
        }
    }

    pub(crate) fn config(message: impl Into<String>) -> Self {
        HarnessError::Config(ConfigErrors(vec![ConfigError {
            line: None,
            message: message.into(),
        }]))
    }
}

impl From<crate::Error> for HarnessError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Io(io) => HarnessError::Io(io),
            e => HarnessError::Contract(e),
        }
    }
}

/// Command-line overrides and the directory relative paths resolve against.
#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Output directory; falls back to `[run] out`, then `splitkit-out`.
    pub out: Option<PathBuf>,
    pub seed_override: Option<u64>,
    /// Directory of the config file, for `kind = "file"` paths.
    pub base_dir: PathBuf,
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub exit_code: u8,
    pub artifacts: Vec<PathBuf>,
    /// One human-readable line per run.
    pub lines: Vec<String>,
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text).map_err(HarnessError::Config)
}

/// Worker pool sized by `SPLITKIT_THREADS` (rayon's default when unset).
pub fn thread_pool() -> Result<rayon::ThreadPool, HarnessError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| HarnessError::config(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Failed(format!("cannot start worker pool: {e}")))
}
