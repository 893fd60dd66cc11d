//! `diotuple`: verification, search, extension, bounds and reproduction of
//! the computations on Diophantine D(n)-tuples.
//!
//! Exit codes: 0 = the claim holds / success, 1 = a witness or violation
//! was found, 2 = usage error.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(outcome) => ExitCode::from(outcome as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
