use std::process::ExitCode;

use clap::Parser;
use rcpt_core::cli::{execute, exit_code, Cli, Outcome, EXIT_VALIDATION};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ValidationFailed) => ExitCode::from(EXIT_VALIDATION),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
