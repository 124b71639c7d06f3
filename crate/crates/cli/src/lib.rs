//! Configuration-driven experiment runner for `ouselect`.
//!
//! A run validates the configuration, computes every artifact in memory and
//! then writes them together with a checksummed manifest.

pub mod artifacts;
pub mod commands;
pub mod config;

use std::path::PathBuf;

use thiserror::Error;

pub use artifacts::{Manifest, MANIFEST};
pub use config::{Command, ExperimentConfig, FamilyKind, Overrides, Rho};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_AUDIT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<ouselect::Error> for CliError {
    fn from(e: ouselect::Error) -> Self {
        use ouselect::Error as E;
        match e {
            E::QuadratureNotConverged { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// Result of a completed run.
#[derive(Debug)]
pub struct RunReport {
    pub out: PathBuf,
    pub manifest: Manifest,
    pub summary: String,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.manifest.passed
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_OK
        } else {
            EXIT_AUDIT
        }
    }
}

/// Validates, runs the command and commits the artifacts under `config.out`.
pub fn run(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    log::info!("running {} with seed {}", config.command()?, config.seed);
    let outcome = commands::dispatch(config)?;
    let mut artifacts = outcome.artifacts;
    artifacts.push(artifacts::SUMMARY, outcome.summary.clone().into_bytes());
    let manifest = artifacts::commit(&config.out, config, outcome.passed, artifacts)?;
    Ok(RunReport {
        out: config.out.clone(),
        manifest,
        summary: outcome.summary,
    })
}
