//! `pbit acf-fit` — autocorrelation estimate and exponential rate fit.

use super::load_model;
use crate::error::CliError;
use crate::header::Header;
use crate::output::emit;
use pbit_core::analysis::{acf_from_trace, exponential_ks, fit_decay_rate, mean};
use pbit_core::sampler::{ideal_params, run_async, InitPolicy};
use pbit_core::{AsyncConfig, EventTrace, StopRule};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct AcfFitArgs {
    /// Existing event-trace file to analyze.
    #[arg(long, conflicts_with_all = ["model", "duration"])]
    pub trace: Option<PathBuf>,

    /// Model to simulate fresh (requires --duration).
    #[arg(long, requires = "duration")]
    pub model: Option<PathBuf>,

    /// Simulated seconds for a fresh run.
    #[arg(long)]
    pub duration: Option<f64>,

    /// Neuron whose autocorrelation is fitted.
    #[arg(long, default_value_t = 0)]
    pub neuron: usize,

    /// Intrinsic rate for fresh runs (ignored with --trace).
    #[arg(long, default_value_t = 150e6)]
    pub lambda0: f64,

    /// Clock rate for resampling the trace (default 4x the trace's
    /// intrinsic rate).
    #[arg(long)]
    pub sample_rate: Option<f64>,

    /// Number of autocorrelation lags.
    #[arg(long, default_value_t = 200)]
    pub max_lag: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &AcfFitArgs) -> Result<(), CliError> {
    let (trace, source) = match (&args.trace, &args.model) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            (EventTrace::parse(&text)?, path.display().to_string())
        }
        (None, Some(path)) => {
            let model = load_model(path)?;
            let duration = args.duration.unwrap();
            if !(duration > 0.0 && duration.is_finite()) {
                return Err(CliError::config(format!(
                    "--duration must be positive and finite, got {duration}"
                )));
            }
            let params = ideal_params(model.n(), args.lambda0);
            let cfg = AsyncConfig {
                stop: StopRule::MaxTime(duration),
                seed: args.seed,
                tau_circ: 0.0,
                init: InitPolicy::RandomUniform,
            };
            (run_async(&model, &params, &cfg)?, path.display().to_string())
        }
        _ => {
            return Err(CliError::config(
                "provide either --trace, or --model with --duration",
            ))
        }
    };
    if args.neuron >= trace.n() {
        return Err(CliError::config(format!(
            "--neuron {} out of range for a {}-neuron trace",
            args.neuron,
            trace.n()
        )));
    }

    let lambda0 = trace.meta().lambda0;
    let sample_rate = args.sample_rate.unwrap_or(4.0 * lambda0);
    let acf = acf_from_trace(&trace, args.neuron, sample_rate, args.max_lag)?;
    let fitted = fit_decay_rate(&acf)?;

    let holding = trace.holding_times(args.neuron);
    let (holding_rate, ks) = if holding.len() >= 10 {
        let rate = 1.0 / mean(&holding)?;
        (Some(rate), Some(exponential_ks(&holding, rate)?))
    } else {
        (None, None)
    };

    let mut text = Header::new("acf-fit")
        .kv("source", source)
        .kv("neuron", args.neuron)
        .kv_opt("duration", args.duration)
        .kv("sample_rate", sample_rate)
        .kv("max_lag", args.max_lag)
        .kv("seed", args.seed)
        .render();
    writeln!(text, "# lambda0 {lambda0}").unwrap();
    writeln!(text, "# fitted_rate {fitted}").unwrap();
    writeln!(text, "# rate_ratio {}", fitted / lambda0).unwrap();
    match (holding_rate, ks) {
        (Some(r), Some(k)) => {
            writeln!(text, "# holding_rate {r}").unwrap();
            writeln!(text, "# ks_statistic {k}").unwrap();
            writeln!(text, "# flips {}", holding.len()).unwrap();
        }
        _ => writeln!(text, "# holding_rate none").unwrap(),
    }
    text.push_str("lag_seconds,acf\n");
    for (k, &v) in acf.values.iter().enumerate() {
        writeln!(text, "{},{v}", k as f64 * acf.dt).unwrap();
    }
    emit(args.out.as_deref(), &text)
}
