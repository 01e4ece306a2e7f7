//! `pbit` — command-line driver for the probabilistic-bit sampler toolkit.
//!
//! One subcommand per workload: raw sampling, exact enumeration,
//! optimization benchmarks, ground-state search demos, contrastive-divergence
//! training and reconstruction, decision-making trajectories, autocorrelation
//! fits, and update-delay studies. Every output file embeds a `#` header with
//! the tool version, the full effective configuration, and the seed, and
//! reruns with identical configuration are byte-identical.

pub mod commands;
pub mod error;
pub mod header;
pub mod output;

use clap::{Parser, Subcommand};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "pbit",
    version,
    about = "Asynchronous probabilistic-bit sampler toolkit",
    subcommand_required = true,
    arg_required_else_help = true
)]
pub struct Cli {
    /// Worker threads for trial ensembles (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Simulate a model and write the event or snapshot trace.
    Sample(commands::sample::SampleArgs),
    /// Exhaustively enumerate a small model's Boltzmann distribution.
    Oracle(commands::oracle::OracleArgs),
    /// Time-to-solution trials on one generated optimization instance.
    Optimize(commands::optimize::OptimizeArgs),
    /// Full scaling benchmark: suites of instances, both engines, fits.
    BenchScaling(commands::bench::BenchScalingArgs),
    /// Ground-state search demo on a mask-encoded model.
    CalDemo(commands::cal::CalDemoArgs),
    /// Train a Boltzmann machine with contrastive divergence.
    TrainCd(commands::traincd::TrainCdArgs),
    /// Reconstruct the unclamped half of an image from a trained model.
    Reconstruct(commands::reconstruct::ReconstructArgs),
    /// Ensemble of goal-directed decision trajectories.
    FlySim(commands::fly::FlySimArgs),
    /// Autocorrelation estimate and exponential rate fit.
    AcfFit(commands::acf::AcfFitArgs),
    /// Sampling fidelity as a function of update-propagation delay.
    DelayStudy(commands::delay::DelayStudyArgs),
    /// Execute a subcommand described by a TOML config file.
    Run(commands::runfile::RunArgs),
}

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sample(a) => commands::sample::run(&a),
        Command::Oracle(a) => commands::oracle::run(&a),
        Command::Optimize(a) => commands::optimize::run(&a),
        Command::BenchScaling(a) => commands::bench::run(&a),
        Command::CalDemo(a) => commands::cal::run(&a),
        Command::TrainCd(a) => commands::traincd::run(&a),
        Command::Reconstruct(a) => commands::reconstruct::run(&a),
        Command::FlySim(a) => commands::fly::run(&a),
        Command::AcfFit(a) => commands::acf::run(&a),
        Command::DelayStudy(a) => commands::delay::run(&a),
        Command::Run(a) => commands::runfile::run(&a),
    }
}

/// Full program entry: parse, configure the worker pool, dispatch, and map
/// errors to exit codes (0 success, 2 config, 3 I/O, 4 numeric).
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return 2;
        }
        // Ignore failure: the global pool can only be built once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}
