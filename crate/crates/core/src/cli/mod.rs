//! Configuration, dispatch and report files behind the `hartree-lab` binary.

mod config;
mod report;
mod run;

use thiserror::Error;

pub use config::{parse_config, Command, RunConfig, Suite, KEYS};
pub use report::{CheckEntry, Provenance, Report, Table};
pub use run::run;

pub const THREADS_VAR: &str = "HARTREE_LAB_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Run {
        context: String,
        #[source]
        source: crate::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn config(line: usize, message: impl Into<String>) -> Self {
        CliError::Config {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn run(context: impl Into<String>, source: impl Into<crate::Error>) -> Self {
        CliError::Run {
            context: context.into(),
            source: source.into(),
        }
    }

    /// `2` for usage and configuration errors, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Run { .. } | CliError::Io { .. } => 1,
        }
    }
}

/// Sizes the global rayon pool from `HARTREE_LAB_THREADS`, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_VAR}: {e}")))
}
