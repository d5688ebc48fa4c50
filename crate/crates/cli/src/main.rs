mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use clandestine_ca::Error;

/// Failure of a command, mapped to the exit code contract.
#[derive(Debug)]
pub enum Failure {
    /// A checked property does not hold (exit 1).
    Assertion(String),
    /// Bad input or unmet precondition (exit 2).
    Input(String),
    /// A computation needed more than the budget (exit 3).
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("ca: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("ca: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("ca: {msg}");
            ExitCode::from(3)
        }
    }
}
