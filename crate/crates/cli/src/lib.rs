//! Configuration-driven driver for the zollspec computations.
//!
//! A run loads a JSON [`config::RunConfig`], computes the artifacts of one
//! [`commands::Command`] in memory on the rayon pool, and writes them
//! single-threaded at the end. Exit codes: 0 success, 1 failed acceptance
//! check or I/O failure, 2 configuration error, 3 numerical failure.

pub mod commands;
pub mod config;
pub mod verify;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use commands::{run_command, Artifacts, Command};
pub use config::{load_config, parse_config, ConfigError, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numeric(#[from] zollspec_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("acceptance checks failed: {0:?}")]
    VerificationFailed(Vec<u32>),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } | CliError::VerificationFailed(_) | CliError::ThreadPool(_) => 1,
        }
    }
}

/// Runs `command` and writes its artifacts into `out_dir`. A failed
/// verification still writes its report before returning the error.
pub fn run(command: Command, cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if command == Command::Verify {
        let report = verify::verify(cfg)?;
        let mut out = Artifacts::default();
        out.add("verify_report.json", report.to_json());
        let written = out.write_all(out_dir)?;
        return if report.all_passed {
            Ok(written)
        } else {
            Err(CliError::VerificationFailed(report.failed()))
        };
    }
    run_command(command, cfg)?.write_all(out_dir)
}
