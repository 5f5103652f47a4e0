//! `csrkn`: catalog, verification, integration runs and convergence studies
//! for energy-preserving csRKN methods.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numerical failure.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::List => Ok(commands::list()),
        Command::Verify(a) => commands::verify(a),
        Command::Integrate(a) => commands::integrate_cmd(a).map(|s| {
            eprintln!("{s}");
            String::new()
        }),
        Command::Convergence(a) => commands::convergence(a).map(|s| {
            eprintln!("{s}");
            String::new()
        }),
        Command::Induce(a) => commands::induce(a),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            if !text.is_empty() && !text.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Verification(report)) => {
            print!("{report}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
