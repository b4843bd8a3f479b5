mod bench;
mod inspect;
mod synth;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsp_core::sim::DEFAULT_QUBIT_CAP;
use qsp_core::{GroupKind, StateVector};

#[derive(Parser)]
#[command(name = "qsp", version, about = "State preparation circuits from LIM decision diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a preparation circuit for a state file.
    Synth(synth::Args),
    /// Print diagram statistics, optionally as Graphviz.
    Inspect(inspect::Args),
    /// Sweep random Clifford+T states and write a CSV report.
    Bench(bench::Args),
}

/// Failure with its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1.
    Verify(String),
    /// Exit 2.
    Usage(String),
    /// Exit 3.
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<qsp_core::Error> for CliError {
    fn from(e: qsp_core::Error) -> Self {
        use qsp_core::Error::*;
        match e {
            Io(_) | Json(_) | Format(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn read_state(path: &PathBuf) -> CliResult<StateVector> {
    StateVector::read_file(path).map_err(|e| io_err(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> CliResult {
    std::fs::write(path, contents).map_err(|e| io_err(path, e))
}

pub fn parse_group(s: &str) -> Result<GroupKind, String> {
    s.parse()
}

/// Oracle cap: `QSP_VERIFY_CAP` if set, else the simulator default.
pub fn verify_cap() -> CliResult<usize> {
    match std::env::var("QSP_VERIFY_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("QSP_VERIFY_CAP: bad value '{v}'"))),
        Err(_) => Ok(DEFAULT_QUBIT_CAP),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Synth(a) => synth::run(a),
        Command::Inspect(a) => inspect::run(a),
        Command::Bench(a) => bench::run(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Verify(m) | CliError::Usage(m) | CliError::Io(m)) = &e;
            eprintln!("error: {m}");
            ExitCode::from(e.code())
        }
    }
}
