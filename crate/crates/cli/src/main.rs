//! Command-line front end for the XXZ swap analysis library.

use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod output;
mod validate;

/// Application-level failures, mapped onto the exit-code contract:
/// usage problems exit 2, computation problems exit 1.
#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Compute(String),
}

impl From<xxzswap::Error> for AppError {
    fn from(e: xxzswap::Error) -> Self {
        AppError::Compute(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = config::Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(AppError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(AppError::Compute(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
