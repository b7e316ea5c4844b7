//! `zrp`: experiments for the zero-range process with size-dependent rates.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;
mod svg;

use config::Config;
use error::{CliError, Result};
use output::Output;

#[derive(Parser)]
#[command(
    name = "zrp",
    version,
    about = "Zero-range process with size-dependent rates"
)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// TOML experiment configuration; defaults are used when absent
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Seed, overriding the one in the config
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for replica sweeps
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Also write SVG figures
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Transition lines and phase labels over a grid of a
    PhaseDiagram,
    /// Entropy densities, finite-size recursion values and pressures
    Entropy,
    /// Rate function of the background density
    RateFunction,
    /// Fluid and condensed lifetimes with exponent fits
    Lifetimes,
    /// Law of large numbers for grand-canonical samples at finite cutoff
    LlnCheck,
    /// Exact stationarity check on a small lattice
    Oracle,
    /// Raw trajectory of background density and maximum
    Simulate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::PhaseDiagram => "phase-diagram",
            Command::Entropy => "entropy",
            Command::RateFunction => "rate-function",
            Command::Lifetimes => "lifetimes",
            Command::LlnCheck => "lln-check",
            Command::Oracle => "oracle",
            Command::Simulate => "simulate",
        }
    }
}

fn run(args: &Args) -> Result<()> {
    if let Some(n) = args.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--workers: {e}")))?;
    }
    let cfg = Config::load(args.config.as_deref(), args.seed)?;
    let out = Output::new(&args.out, args.command.name(), &cfg, args.svg)?;
    match args.command {
        Command::PhaseDiagram => commands::phase_diagram::run(&cfg, &out),
        Command::Entropy => commands::entropy::run(&cfg, &out),
        Command::RateFunction => commands::rate_function::run(&cfg, &out),
        Command::Lifetimes => commands::lifetimes::run(&cfg, &out),
        Command::LlnCheck => commands::lln::run(&cfg, &out),
        Command::Oracle => commands::oracle::run(&cfg, &out),
        Command::Simulate => commands::simulate::run(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
