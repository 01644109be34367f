//! `recession-cascade`: simulate, analyze, compare, path-length and sweep
//! commands over the cascade model.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{AnalyzeArgs, CompareArgs, PathlenArgs, SimulateArgs, SweepArgs};

#[derive(Debug, Parser)]
#[command(name = "recession-cascade", version, about = "Recessions as a threshold cascade on a small-world network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Monte Carlo ensemble and write the aggregate report.
    Simulate(SimulateArgs),
    /// Extract stylized facts from a GDP levels CSV.
    Analyze(AnalyzeArgs),
    /// Score a simulation report against stylized facts.
    Compare(CompareArgs),
    /// Average path length against rewiring probability.
    Pathlen(PathlenArgs),
    /// Run and score a grid of parameter sets.
    Sweep(SweepArgs),
}

const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    use cascade_core::ErrorClass;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<cascade_core::Error>() {
            return match e.class() {
                ErrorClass::Config => EXIT_CONFIG,
                ErrorClass::Io => EXIT_IO,
                ErrorClass::Numeric => EXIT_NUMERIC,
            };
        }
        if cause.downcast_ref::<config::ConfigError>().is_some() {
            return EXIT_CONFIG;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() || cause.downcast_ref::<serde_json::Error>().is_some() {
            return EXIT_IO;
        }
    }
    EXIT_NUMERIC
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Compare(args) => commands::compare(args),
        Command::Pathlen(args) => commands::pathlen(args),
        Command::Sweep(args) => commands::sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
