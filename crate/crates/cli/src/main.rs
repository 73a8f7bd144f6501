//! Batch front end: reads a JSON run configuration, drives the
//! construction/verification pipeline, and writes CSV, JSON, and SVG
//! artifacts.
//!
//! Exit codes: 0 success (for `verify`, all records pass), 1 failing
//! verification records, 2 invalid input, 3 numeric failure.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliResult;

#[derive(Parser)]
#[command(
    name = "exflat",
    version,
    about = "Flat surfaces with unit-Neumann harmonic roofs: generation, verification, and comparison artifacts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides outputs.dir from the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized sampling; overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Trace the boundary arcs and map the interior grid.
    Generate(Common),
    /// Run the verification suite and write its report.
    Verify(Common),
    /// Export the closed-form reference data.
    Catalogue(Common),
    /// Fit the two-anchor surface to the hairpin and report the transform.
    Compare(Common),
    /// Extrapolate the end directions at every anchor.
    Ends(Common),
}

fn run(cli: &Cli) -> CliResult<bool> {
    type Action = fn(&config::RunConfig) -> CliResult<bool>;
    let (common, action): (&Common, Action) = match &cli.command {
        Command::Generate(c) => (c, commands::generate),
        Command::Verify(c) => (c, commands::verify),
        Command::Catalogue(c) => (c, commands::catalogue),
        Command::Compare(c) => (c, commands::compare),
        Command::Ends(c) => (c, commands::ends),
    };
    let cfg = config::load(&common.config, common.out.clone(), common.seed)?;
    action(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
