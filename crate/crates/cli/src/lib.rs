//! Command line front end: configuration, structure-constant cache, the
//! `report`, `curvature` and `flow` commands and their JSON reports.

pub mod cache;
pub mod commands;
pub mod config;
pub mod report;

use thiserror::Error;

pub use commands::run;
pub use config::{Args, Cli, Command, RunConfig};
pub use report::{Block, Report, Tolerance};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("construction error: {0}")]
    Construction(String),
}

impl From<spsym::Error> for CliError {
    fn from(e: spsym::Error) -> Self {
        match e {
            spsym::Error::InvalidInput(_) | spsym::Error::Budget(_) => CliError::Config(e.to_string()),
            _ => CliError::Construction(e.to_string()),
        }
    }
}

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

pub fn exit_code(r: &Result<Report, CliError>) -> i32 {
    match r {
        Ok(rep) if rep.pass => EXIT_PASS,
        Ok(_) => EXIT_ASSERTION,
        Err(_) => EXIT_ERROR,
    }
}
