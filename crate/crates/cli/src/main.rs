use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fcrystal_cli::{run, Command};

fn main() -> ExitCode {
    let outcome = run(&Command::parse());
    if let Some(report) = &outcome.report {
        let _ = std::io::stdout().write_all(report.as_bytes());
    }
    if let Some(error) = &outcome.error {
        let _ = std::io::stderr().write_all(error.as_bytes());
    }
    ExitCode::from(outcome.status as u8)
}
