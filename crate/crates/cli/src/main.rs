//! `halfplane-bvp`: kernel tables, solves, classification, the verification
//! suite and multiplier spectra from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration or
//! threshold rejection, 3 numerical failure.

mod commands;
mod manifest;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use halfplane_bvp::Error;
use manifest::{Flags, Settings};

#[derive(Parser)]
#[command(name = "halfplane-bvp", version, about = "Boundary value problems for div A_k grad U = 0 in the upper half plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the harmonic measures P_alpha(t, x; y) (csv, json or svg).
    KernelTable(Flags),
    /// Solve a Dirichlet, Neumann or regularity problem on a grid.
    Solve(Flags),
    /// Well-posedness over (k, p) in both senses.
    Classify(Flags),
    /// Run the verification suite.
    Verify(Flags),
    /// Tabulate the multiplier symbol and the product identity residual.
    Spectrum(Flags),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidExponent(_)
                | Error::BranchDegenerate { .. }
                | Error::DomainError(_)
                | Error::InvalidScheme(_)
                | Error::OutOfBoundednessRange { .. }
                | Error::NotInvertible { .. }
                | Error::NotWellPosed { .. }
                | Error::EvaluationOnInterface => 2,
                _ => 3,
            },
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("HALFPLANE_BVP_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("HALFPLANE_BVP_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    init_threads()?;
    match cli.command {
        Command::KernelTable(f) => commands::kernel_table(&Settings::resolve(f)?)?,
        Command::Solve(f) => commands::solve(&Settings::resolve(f)?)?,
        Command::Classify(f) => commands::classify_table(&Settings::resolve(f)?)?,
        Command::Spectrum(f) => commands::spectrum(&Settings::resolve(f)?)?,
        Command::Verify(f) => {
            let failed = commands::verify(&Settings::resolve(f)?)?;
            if !failed.is_empty() {
                eprintln!("failing checks:");
                for f in &failed {
                    eprintln!("  {f}");
                }
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
