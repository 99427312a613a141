//! `barrierlab` command-line front end.
//!
//! Exit status: 0 when every requested check passes, 1 when a check fails,
//! 2 on malformed input or unusable geometry.

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use report::{CliError, Report};

fn run(cli: &Cli) -> Result<Report, CliError> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))?;
    }
    let outcome = commands::dispatch(cli)?;
    Ok(Report::new(cli, outcome))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| r.emit(&cli.global).map(|()| r.pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
