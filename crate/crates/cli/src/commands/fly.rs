//! `pbit fly-sim` — ensemble of goal-directed decision trajectories.

use crate::error::CliError;
use crate::header::Header;
use crate::output::emit;
use pbit_core::neuro::{choice_counts, choice_entropy, first_split, simulate_trajectory};
use pbit_core::neuro::{FlyWorld, Termination, Trajectory};
use pbit_core::seed::derive_u64;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct FlySimArgs {
    /// Target coordinates as "x1,y1;x2,y2;...".
    #[arg(long, allow_hyphen_values = true)]
    pub targets: String,

    /// Coupling tuning exponent.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,

    /// Neuron count (must divide evenly over the targets).
    #[arg(long, default_value_t = 16)]
    pub n: usize,

    /// Memory bias toward each neuron's previous value.
    #[arg(long, default_value_t = 0.3)]
    pub alpha_mem: f64,

    /// Maximum distance moved per decision step.
    #[arg(long, default_value_t = 40.0)]
    pub v0: f64,

    /// Expected per-neuron update opportunities per decision step.
    #[arg(long, default_value_t = 410)]
    pub step_samples: u64,

    #[arg(long, default_value_t = 1e7)]
    pub lambda0: f64,

    /// Neuron response sharpness (the per-step network is sampled at
    /// e^{-gain*H}); spontaneous commitment needs gain > 2.
    #[arg(long, default_value_t = 3.0)]
    pub gain: f64,

    /// Capture radius as a fraction of the smallest initial target
    /// distance.
    #[arg(long, default_value_t = 0.01)]
    pub capture_frac: f64,

    /// Maximum decision steps per trajectory.
    #[arg(long, default_value_t = 400)]
    pub step_cap: usize,

    /// Start position as "x,y".
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub start: String,

    #[arg(long, default_value_t = 200)]
    pub trials: usize,

    /// Ensemble split threshold: inter-cluster distance over mean
    /// intra-cluster spread.
    #[arg(long, default_value_t = 4.0)]
    pub split_ratio: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Trajectory CSV (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_point(text: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::config(format!(
            "expected \"x,y\", got \"{text}\""
        )));
    }
    let mut out = [0.0; 2];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::config(format!("bad coordinate \"{part}\"")))?;
        if !slot.is_finite() {
            return Err(CliError::config(format!("bad coordinate \"{part}\"")));
        }
    }
    Ok(out)
}

fn parse_targets(text: &str) -> Result<Vec<[f64; 2]>, CliError> {
    text.split(';')
        .filter(|chunk| !chunk.trim().is_empty())
        .map(parse_point)
        .collect()
}

pub fn run(args: &FlySimArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::config("--trials must be at least 1"));
    }
    let world = FlyWorld {
        targets: parse_targets(&args.targets)?,
        start: parse_point(&args.start)?,
        n: args.n,
        eta: args.eta,
        alpha_mem: args.alpha_mem,
        v0: args.v0,
        step_samples: args.step_samples,
        lambda0: args.lambda0,
        capture_frac: args.capture_frac,
        step_cap: args.step_cap,
        gain: args.gain,
    };
    world.validate()?;

    let trajectories = (0..args.trials)
        .into_par_iter()
        .map(|t| simulate_trajectory(&world, derive_u64(args.seed, "fly-trial", t as u64)))
        .collect::<Result<Vec<Trajectory>, _>>()?;

    let mut text = Header::new("fly-sim")
        .kv("targets", &args.targets)
        .kv("start", &args.start)
        .kv("eta", args.eta)
        .kv("n", args.n)
        .kv("alpha_mem", args.alpha_mem)
        .kv("v0", args.v0)
        .kv("step_samples", args.step_samples)
        .kv("lambda0", args.lambda0)
        .kv("gain", args.gain)
        .kv("capture_frac", args.capture_frac)
        .kv("step_cap", args.step_cap)
        .kv("trials", args.trials)
        .kv("split_ratio", args.split_ratio)
        .kv("seed", args.seed)
        .render();

    let counts = choice_counts(&trajectories, world.targets.len());
    writeln!(text, "# choices {}", super::join_list(&counts)).unwrap();
    writeln!(text, "# entropy {}", choice_entropy(&counts)).unwrap();
    let capped = trajectories
        .iter()
        .filter(|t| matches!(t.termination, Termination::StepCap))
        .count();
    writeln!(text, "# capped {capped}").unwrap();
    match first_split(&trajectories, args.split_ratio, args.v0) {
        Some(split) => {
            writeln!(text, "# split_step {}", split.step).unwrap();
            writeln!(text, "# split_distance {}", split.distance).unwrap();
            writeln!(text, "# split_inter_cluster {}", split.inter_cluster).unwrap();
            writeln!(text, "# split_mean_intra {}", split.mean_intra_spread).unwrap();
        }
        None => writeln!(text, "# split_step none").unwrap(),
    }
    for (t, traj) in trajectories.iter().enumerate() {
        let termination = match traj.termination {
            Termination::ReachedTarget(k) => format!("target={k}"),
            Termination::StepCap => "cap".to_string(),
        };
        writeln!(
            text,
            "# trial {t} steps {} termination {termination}",
            traj.steps.len()
        )
        .unwrap();
    }

    text.push_str("trial,step,x,y,vx,vy\n");
    for (t, traj) in trajectories.iter().enumerate() {
        writeln!(text, "{t},0,{},{},0,0", traj.start[0], traj.start[1]).unwrap();
        for (k, step) in traj.steps.iter().enumerate() {
            writeln!(
                text,
                "{t},{},{},{},{},{}",
                k + 1,
                step.position[0],
                step.position[1],
                step.velocity[0],
                step.velocity[1]
            )
            .unwrap();
        }
    }
    emit(args.out.as_deref(), &text)
}
