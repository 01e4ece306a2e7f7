//! `pbit delay-study` — sampling fidelity vs update-propagation delay.
//!
//! Procedure: measure the intrinsic p-bit autocorrelation time tau_acf on
//! an isolated free neuron running at the same rate (its relaxation rate is
//! the intrinsic update rate, so tau_acf is about 1/lambda0 — measured, not
//! assumed). Then for each requested ratio r set the propagation delay to
//! tau_acf / r, run the model, and report the total-variation distance
//! between the time-weighted occupancy and the exact Boltzmann
//! distribution. The reported breakpoint is the half-recovery ratio: where
//! the distance falls to the midpoint between the largest-delay distortion
//! and the zero-delay floor. The network's own correlation time is much
//! longer than the intrinsic one for strongly coupled models; delays are
//! compared against the intrinsic scale because that is what the update
//! pipeline competes with.

use super::load_model;
use crate::error::CliError;
use crate::header::Header;
use crate::output::emit;
use pbit_core::analysis::{
    acf_from_trace, exact_distribution, fit_decay_rate, occupancy_distribution, tv_distance,
};
use pbit_core::model::{EnergySign, SpinDomain};
use pbit_core::sampler::{ideal_params, run_async, InitPolicy};
use pbit_core::seed::derive_u64;
use pbit_core::{AsyncConfig, IsingModel, StopRule};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct DelayStudyArgs {
    /// Model file (default: the built-in AND-gate model).
    #[arg(long)]
    pub model: Option<PathBuf>,

    /// Delay ratios tau_acf / tau_circ to evaluate, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0, 5.0, 10.0])]
    pub ratios: Vec<f64>,

    #[arg(long, default_value_t = 300e6)]
    pub lambda0: f64,

    /// Applied flips per measurement run.
    #[arg(long, default_value_t = 1_000_000)]
    pub events: u64,

    /// Applied flips in the autocorrelation probe run.
    #[arg(long, default_value_t = 200_000)]
    pub acf_events: u64,

    /// Autocorrelation lags for the probe fit.
    #[arg(long, default_value_t = 200)]
    pub max_lag: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Three-spin Boltzmann machine whose four ground states are exactly the
/// truth table of c = a AND b (all at energy -3; every violation costs at
/// least +1).
pub fn and_gate_model() -> IsingModel {
    IsingModel::new(
        SpinDomain::PlusMinus,
        EnergySign::Ferromagnetic,
        vec![1.0, 1.0, -2.0],
        vec![(0, 1, -1.0), (0, 2, 2.0), (1, 2, 2.0)],
    )
    .expect("built-in AND-gate model is valid")
}

/// Half-recovery breakpoint: the ratio at which the distortion falls to the
/// midpoint between the worst measured distortion (at the smallest ratio,
/// i.e. the largest delay) and the zero-delay floor. The crossing is
/// log-interpolated between the bracketing measured ratios, so the reported
/// value is not restricted to the requested grid. Returns the threshold and
/// the crossing ratio (`None` when the curve never recovers that far).
///
/// `ratios` must be sorted ascending with `tvs` aligned to it.
pub fn breakpoint_ratio(ratios: &[f64], tvs: &[f64], tv_zero: f64) -> (f64, Option<f64>) {
    let worst = tvs[0];
    let threshold = 0.5 * (worst + tv_zero);
    if worst <= threshold {
        return (threshold, Some(ratios[0]));
    }
    for k in 1..tvs.len() {
        if tvs[k] <= threshold {
            let (r0, r1) = (ratios[k - 1], ratios[k]);
            let (t0, t1) = (tvs[k - 1], tvs[k]);
            let frac = if t0 > t1 { (t0 - threshold) / (t0 - t1) } else { 1.0 };
            let r = (r0.ln() + frac * (r1.ln() - r0.ln())).exp();
            return (threshold, Some(r));
        }
    }
    (threshold, None)
}

pub fn run(args: &DelayStudyArgs) -> Result<(), CliError> {
    if args.ratios.is_empty() {
        return Err(CliError::config("--ratios must list at least one ratio"));
    }
    for &r in &args.ratios {
        if !(r > 0.0 && r.is_finite()) {
            return Err(CliError::config(format!(
                "ratios must be positive and finite, got {r}"
            )));
        }
    }
    let mut ratios = args.ratios.clone();
    ratios.sort_by(f64::total_cmp);

    let model = match &args.model {
        Some(path) => load_model(path)?,
        None => and_gate_model(),
    };
    let exact = exact_distribution(&model)?;
    let params = ideal_params(model.n(), args.lambda0);

    let run_with = |tau_circ: f64, events: u64, label: &'static str, index: u64| {
        let cfg = AsyncConfig {
            stop: StopRule::MaxEvents(events),
            seed: derive_u64(args.seed, label, index),
            tau_circ,
            init: InitPolicy::RandomUniform,
        };
        run_async(&model, &params, &cfg)
    };

    // Intrinsic-timescale probe: one free neuron at the same rate.
    let free = IsingModel::new(
        model.domain(),
        model.sign(),
        vec![0.0],
        Vec::new(),
    )
    .expect("free one-neuron model is valid");
    let probe_cfg = AsyncConfig {
        stop: StopRule::MaxEvents(args.acf_events),
        seed: derive_u64(args.seed, "delay-acf", 0),
        tau_circ: 0.0,
        init: InitPolicy::RandomUniform,
    };
    let probe = run_async(&free, &ideal_params(1, args.lambda0), &probe_cfg)?;
    let est = acf_from_trace(&probe, 0, 4.0 * args.lambda0, args.max_lag)?;
    let tau_acf = 1.0 / fit_decay_rate(&est)?;

    let baseline = run_with(0.0, args.events, "delay-baseline", 0)?;
    let tv_zero = tv_distance(&occupancy_distribution(&baseline)?, exact.probs())?;

    let mut tvs = Vec::with_capacity(ratios.len());
    for (k, &ratio) in ratios.iter().enumerate() {
        let trace = run_with(tau_acf / ratio, args.events, "delay-ratio", k as u64)?;
        tvs.push(tv_distance(
            &occupancy_distribution(&trace)?,
            exact.probs(),
        )?);
    }
    let (threshold, breakpoint) = breakpoint_ratio(&ratios, &tvs, tv_zero);

    let model_label = match &args.model {
        Some(p) => p.display().to_string(),
        None => "builtin-and-gate".to_string(),
    };
    let mut text = Header::new("delay-study")
        .kv("model", model_label)
        .kv("ratios", super::join_list(&ratios))
        .kv("lambda0", args.lambda0)
        .kv("events", args.events)
        .kv("acf_events", args.acf_events)
        .kv("max_lag", args.max_lag)
        .kv("seed", args.seed)
        .render();
    writeln!(text, "# tau_acf {tau_acf}").unwrap();
    writeln!(text, "# tv_zero_delay {tv_zero}").unwrap();
    writeln!(text, "# threshold {threshold}").unwrap();
    match breakpoint {
        Some(r) => writeln!(text, "# breakpoint_ratio {r}").unwrap(),
        None => writeln!(text, "# breakpoint_ratio none").unwrap(),
    }
    text.push_str("ratio,tau_circ,tv\n");
    for (&ratio, &tv) in ratios.iter().zip(&tvs) {
        writeln!(text, "{ratio},{},{tv}", tau_acf / ratio).unwrap();
    }
    emit(args.out.as_deref(), &text)
}
