//! Command-line front end for the grid-cell path integrator: config file
//! parsing, CSV and snapshot formats, and the simulate / calibrate /
//! compare / bench subcommands.

pub mod args;
pub mod commands;
pub mod config_file;
pub mod csv_io;
pub mod numfmt;
pub mod snapshot;

use std::fmt;

/// One-line diagnostics; every failure path reduces to a message and a
/// nonzero exit.
#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<gridcell_core::Error> for CliError {
    fn from(e: gridcell_core::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
