//! `subseg`: corpus segmentation pipelines from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

mod args;
mod commands;
mod manifest;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use thiserror::Error;

use crate::args::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Data {
        context: String,
        #[source]
        source: subseg_core::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) => 1,
            CliError::Data { .. } => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a file or stream name to core errors.
pub trait Context<T> {
    fn ctx(self, context: impl std::fmt::Display) -> CliResult<T>;
}

impl<T, E: Into<subseg_core::Error>> Context<T> for Result<T, E> {
    fn ctx(self, context: impl std::fmt::Display) -> CliResult<T> {
        self.map_err(|e| CliError::Data {
            context: context.to_string(),
            source: e.into(),
        })
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("SUBSEG_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("SUBSEG_THREADS must be an integer, got {v:?}")))?;
    if n > 0 {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `argv` and runs the selected command.
pub fn execute(argv: Vec<OsString>) -> CliResult<()> {
    let matches = Cli::command().try_get_matches_from(&argv)?;
    let cli = Cli::from_arg_matches(&matches)?;
    configure_threads()?;
    commands::dispatch(cli, &matches)
}

pub fn run(argv: Vec<OsString>) -> u8 {
    match execute(argv) {
        Ok(()) => 0,
        Err(CliError::Clap(e)) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
        Err(e) => {
            eprintln!("subseg: error: {e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os().collect()))
}
