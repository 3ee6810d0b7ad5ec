use std::process::ExitCode;

use clap::Parser;
use ffdecomp::Cli;

fn main() -> ExitCode {
    let code = ffdecomp::run(Cli::parse());
    ExitCode::from(code as u8)
}
