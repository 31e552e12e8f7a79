use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cohocalc_core::{dsl, repro, selfcheck, Error, Report};

/// Exact intersection numbers on presented cohomology rings.
#[derive(Parser)]
#[command(name = "cohocalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a ring-description file.
    Eval {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run a reproduction scenario, or `all`.
    Repro {
        scenario: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the internal consistency suite.
    Selfcheck {
        #[arg(long)]
        json: bool,
    },
}

const PASS: u8 = 0;
const MISMATCH: u8 = 1;
const INPUT: u8 = 2;

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    ExitCode::from(if report.passed() { PASS } else { MISMATCH })
}

fn fail(message: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

/// Unknown names are the caller's mistake; anything else is a kernel failure.
fn kernel_failure(e: Error) -> ExitCode {
    let code = if matches!(e, Error::UnknownScenario(_)) { INPUT } else { MISMATCH };
    fail(e, code)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Eval { file, json } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", file.display()), INPUT),
            };
            match dsl::run(&text) {
                Ok(mut report) => {
                    report.scenario = file.display().to_string();
                    emit(&report, json)
                }
                Err(e) => fail(format!("{}:{e}", file.display()), INPUT),
            }
        }
        Command::Repro { scenario, json } => match repro::repro(&scenario) {
            Ok(report) => emit(&report, json),
            Err(e) => kernel_failure(e),
        },
        Command::Selfcheck { json } => match selfcheck::selfcheck() {
            Ok(report) => emit(&report, json),
            Err(e) => kernel_failure(e),
        },
    }
}
