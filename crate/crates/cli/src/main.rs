//! Batch front-end for the sampling and verification library: reproducible
//! experiments driven by JSON configs, emitting sample files, verdict
//! JSON, and plot-ready tail reports.
//!
//! Exit codes are a stable contract for CI: 0 = pass/holds, 1 = refuted or
//! bound violated, 2 = usage/config error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "negdep", version, about = "Samplers and concentration-bound verification for negatively dependent measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw samples from a configured source into a text file.
    Sample(CommonArgs),
    /// Run dependence checks and Lipschitz verification; exit 1 on refutation.
    Verify(CommonArgs),
    /// Produce a tail report (CSV + JSON) against closed-form bounds;
    /// exit 1 when a bound is violated.
    Tail(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Master seed; all randomness derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trial count (sample rows / Monte Carlo trials).
    #[arg(long)]
    trials: Option<u64>,
    /// Worker threads for trial parallelism (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output path: sample file, verdict JSON, or tail report base path
    /// (`.csv` and `.json` are appended).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match &cli.command {
        Command::Sample(a) | Command::Verify(a) | Command::Tail(a) => a,
    };
    if let Some(workers) = args.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: building worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome: Result<u8> = match &cli.command {
        Command::Sample(a) => commands::sample::run(a),
        Command::Verify(a) => commands::verify::run(a),
        Command::Tail(a) => commands::tail::run(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
