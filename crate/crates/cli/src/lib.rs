//! Batch front-end: one JSON configuration in, one CSV or JSON report out.
//!
//! Exit codes: 0 on success, 1 for a negative mathematical outcome (a FAIL
//! verdict, a point outside the domain, a tuple that lacks a required
//! admissibility), 2 for input errors.

mod commands;
pub mod config;
pub mod report;

use thiserror::Error;

pub use config::RunConfig;
pub use report::{Format, Report, Status, Table};

pub const COMMANDS: [&str; 12] = [
    "validate",
    "coeffs",
    "domain",
    "kernel",
    "weights",
    "probes",
    "dettrace",
    "radius",
    "subnormality",
    "hereditary",
    "pick-verify",
    "quadrature",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    /// The input is well formed but the mathematics rules the request out.
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Rejected(_) => Status::Negative,
            _ => Status::InputError,
        }
    }
}

/// Runs the command named in `config`. `seed` drives every random choice.
pub fn run(config: &RunConfig, seed: u64) -> Result<Report, CliError> {
    match config.command.as_str() {
        "validate" => commands::validate(config),
        "coeffs" => commands::coeffs(config),
        "domain" => commands::domain(config, seed),
        "kernel" => commands::kernel(config, seed),
        "weights" => commands::weights(config),
        "probes" => commands::probes(config, seed),
        "dettrace" => commands::dettrace(config),
        "radius" => commands::radius(config),
        "subnormality" => commands::subnormality(config),
        "hereditary" => commands::hereditary(config),
        "pick-verify" => commands::pick(config),
        "quadrature" => commands::quadrature(config),
        other => Err(CliError::UnknownCommand(other.to_string())),
    }
}

/// Parses `text` and runs it; every failure becomes a report with the
/// matching status, so callers always have something to write.
pub fn run_str(text: &str, seed: u64) -> Report {
    let config = match RunConfig::from_json_str(text) {
        Ok(c) => c,
        Err(e) => return Report::error("", &format!("invalid config: {e}")),
    };
    match run(&config, seed) {
        Ok(r) => r,
        Err(e) => {
            let mut r = Report::error(&config.command, &e.to_string());
            r.status = e.status();
            r
        }
    }
}
