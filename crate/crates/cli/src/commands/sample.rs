//! `pbit sample` — run one simulation and write the trace.

use super::{build_params, load_model, EngineArg, InitArg};
use crate::error::CliError;
use crate::header::Header;
use crate::output::emit;
use pbit_core::sampler::{run_sync, SyncConfig, SyncLength};
use pbit_core::{AsyncConfig, StopRule};
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct SampleArgs {
    /// Model file to sample.
    #[arg(long)]
    pub model: PathBuf,

    #[arg(long, value_enum, default_value_t = EngineArg::Async)]
    pub engine: EngineArg,

    /// Applied flips (async) or single-site updates (sync).
    #[arg(long, default_value_t = 1000)]
    pub events: u64,

    /// Simulated-seconds budget; async only, overrides --events.
    #[arg(long)]
    pub max_time: Option<f64>,

    /// Per-neuron intrinsic update rate in Hz.
    #[arg(long, default_value_t = 150e6)]
    pub lambda0: f64,

    /// Update-propagation delay in seconds (async only).
    #[arg(long, default_value_t = 0.0)]
    pub tau_circ: f64,

    /// Device-variation spread of response slopes.
    #[arg(long, default_value_t = 0.0)]
    pub slope_sd: f64,

    /// Device-variation spread of response offsets.
    #[arg(long, default_value_t = 0.0)]
    pub offset_sd: f64,

    /// Probability that a neuron is stuck and never updates.
    #[arg(long, default_value_t = 0.0)]
    pub dead_prob: f64,

    #[arg(long, value_enum, default_value_t = InitArg::Random)]
    pub init: InitArg,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &SampleArgs) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let params = build_params(
        model.n(),
        args.lambda0,
        args.slope_sd,
        args.offset_sd,
        args.dead_prob,
        args.seed,
    )?;

    let header = Header::new("sample")
        .kv("model", args.model.display())
        .kv("engine", args.engine.label())
        .kv("events", args.events)
        .kv_opt("max_time", args.max_time)
        .kv("lambda0", args.lambda0)
        .kv("tau_circ", args.tau_circ)
        .kv("slope_sd", args.slope_sd)
        .kv("offset_sd", args.offset_sd)
        .kv("dead_prob", args.dead_prob)
        .kv("init", args.init.label())
        .kv("seed", args.seed);

    let body = match args.engine {
        EngineArg::Async => {
            let stop = match args.max_time {
                Some(t) => StopRule::MaxTime(t),
                None => StopRule::MaxEvents(args.events),
            };
            let cfg = AsyncConfig {
                stop,
                seed: args.seed,
                tau_circ: args.tau_circ,
                init: args.init.to_policy(),
            };
            pbit_core::sampler::run_async(&model, &params, &cfg)?.to_text()
        }
        EngineArg::Sync => {
            if args.tau_circ != 0.0 {
                return Err(CliError::config(
                    "--tau-circ models asynchronous propagation delay; use --engine async",
                ));
            }
            if args.max_time.is_some() {
                return Err(CliError::config(
                    "--max-time applies to the async engine; bound sync runs with --events",
                ));
            }
            let cfg = SyncConfig {
                length: SyncLength::Updates(args.events),
                seed: args.seed,
                init: args.init.to_policy(),
            };
            run_sync(&model, &params, &cfg)?.to_text()
        }
    };

    emit(args.out.as_deref(), &(header.render() + &body))
}
