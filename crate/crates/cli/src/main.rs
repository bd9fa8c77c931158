use std::io;
use std::process::ExitCode;

use clap::Parser;
use minres_cli::args::Cli;

fn main() -> ExitCode {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = match Cli::try_parse() {
        Ok(cli) => minres_cli::run(&cli, &mut out, &mut err),
        Err(e) => minres_cli::usage_failure(e, &mut out, &mut err),
    };
    ExitCode::from(code)
}
