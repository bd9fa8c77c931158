//! Command-line front end for `minres-core`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input or pressure law,
//! 3 solver did not converge, 4 a certificate failed (`verify`). Errors go
//! to standard error as one line of JSON.

pub mod args;
pub mod commands;
pub mod output;
pub mod report;

use std::io::Write;

use args::{Cli, Command};
use commands::CliError;

/// Runs a parsed command, returning the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let result = match &cli.command {
        Command::Solve(a) => commands::cmd_solve(a, stdout),
        Command::Verify(a) => commands::cmd_verify(a, stdout),
        Command::Classify(p) => commands::cmd_classify(p, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}

/// Maps a clap parse failure to the JSON error convention; help and version
/// requests print normally and succeed.
pub fn usage_failure(err: clap::Error, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    use clap::error::ErrorKind;
    match err.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let _ = write!(stdout, "{}", err.render());
            if err.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                2
            } else {
                0
            }
        }
        _ => {
            let message = err.render().to_string();
            // keep the diagnostic paragraph, drop the usage and help hints
            let text = message
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(str::trim)
                .collect::<Vec<_>>()
                .join(" ");
            let e = CliError::Usage(text.trim_start_matches("error: ").to_string());
            let _ = writeln!(stderr, "{}", e.to_json());
            2
        }
    }
}
