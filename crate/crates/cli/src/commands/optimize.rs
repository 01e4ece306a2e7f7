//! `pbit optimize` — time-to-solution trials on one generated instance.

use super::{EngineSelArg, ProblemArg};
use crate::error::CliError;
use crate::header::Header;
use crate::output::emit;
use pbit_core::analysis::{async_time_to_target, median, sync_time_to_target, FirstHit};
use pbit_core::opt::{best_known_energy, gen_maxcut, gen_sk, maxcut_to_ising, EdgeFill, WeightScheme};
use pbit_core::sampler::{ideal_params, InitPolicy, SyncConfig, SyncLength};
use pbit_core::seed::derive_u64;
use pbit_core::{AsyncConfig, IsingModel, StopRule};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,

    /// Problem size (vertices / spins).
    #[arg(long)]
    pub n: usize,

    /// Seed selecting the random instance.
    #[arg(long, default_value_t = 0)]
    pub instance_seed: u64,

    /// Inverse-temperature factor applied to instance couplings.
    #[arg(long, default_value_t = 0.35)]
    pub coupling_scale: f64,

    #[arg(long, default_value_t = 20)]
    pub trials: usize,

    #[arg(long, value_enum, default_value_t = EngineSelArg::Both)]
    pub engine: EngineSelArg,

    #[arg(long, default_value_t = 150e6)]
    pub lambda0: f64,

    /// Per-trial simulated-seconds budget; misses score infinity.
    #[arg(long, default_value_t = 1e-4)]
    pub max_time: f64,

    /// Greedy-descent restarts used to certify the target energy when the
    /// instance is too large for exhaustive enumeration.
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn build_instance(args: &OptimizeArgs) -> Result<IsingModel, CliError> {
    let model = match args.problem {
        ProblemArg::Maxcut => {
            let graph = gen_maxcut(
                args.n,
                EdgeFill::Complete,
                WeightScheme::PlusMinusUnit,
                args.instance_seed,
            )?;
            maxcut_to_ising(&graph)?.model
        }
        ProblemArg::Sk => gen_sk(args.n, args.instance_seed)?,
    };
    if !(args.coupling_scale > 0.0 && args.coupling_scale.is_finite()) {
        return Err(CliError::config(format!(
            "--coupling-scale must be positive and finite, got {}",
            args.coupling_scale
        )));
    }
    Ok(model.scaled(args.coupling_scale))
}

fn fmt_hit(hit: &FirstHit) -> (f64, f64) {
    (hit.time.unwrap_or(f64::INFINITY), hit.best_energy)
}

pub fn run(args: &OptimizeArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::config("--trials must be at least 1"));
    }
    if !(args.max_time > 0.0 && args.max_time.is_finite()) {
        return Err(CliError::config(format!(
            "--max-time must be positive and finite, got {}",
            args.max_time
        )));
    }
    let model = build_instance(args)?;
    let params = ideal_params(model.n(), args.lambda0);
    let target =
        best_known_energy(&model, args.restarts, derive_u64(args.seed, "optimize-descent", 0))?;

    let problem_label = match args.problem {
        ProblemArg::Maxcut => "maxcut",
        ProblemArg::Sk => "sk",
    };
    let mut text = Header::new("optimize")
        .kv("problem", problem_label)
        .kv("n", args.n)
        .kv("instance_seed", args.instance_seed)
        .kv("coupling_scale", args.coupling_scale)
        .kv("trials", args.trials)
        .kv("engine", args.engine.label())
        .kv("lambda0", args.lambda0)
        .kv("max_time", args.max_time)
        .kv("restarts", args.restarts)
        .kv("seed", args.seed)
        .render();
    writeln!(text, "# target {target}").unwrap();

    let mut rows: Vec<(String, usize, f64, f64)> = Vec::new();
    if args.engine.wants_async() {
        let hits = (0..args.trials)
            .into_par_iter()
            .map(|t| {
                let cfg = AsyncConfig {
                    stop: StopRule::MaxTime(args.max_time),
                    seed: derive_u64(args.seed, "optimize-async-trial", t as u64),
                    tau_circ: 0.0,
                    init: InitPolicy::RandomUniform,
                };
                async_time_to_target(&model, &params, &cfg, target)
            })
            .collect::<Result<Vec<_>, _>>()?;
        summarize(&mut text, "async", &hits);
        for (t, h) in hits.iter().enumerate() {
            let (tts, best) = fmt_hit(h);
            rows.push(("async".into(), t, tts, best));
        }
    }
    if args.engine.wants_sync() {
        let updates = (args.max_time * args.lambda0).floor() as u64;
        if updates == 0 {
            return Err(CliError::config(
                "--max-time too small: sync engine gets zero updates",
            ));
        }
        let hits = (0..args.trials)
            .into_par_iter()
            .map(|t| {
                let cfg = SyncConfig {
                    length: SyncLength::Updates(updates),
                    seed: derive_u64(args.seed, "optimize-sync-trial", t as u64),
                    init: InitPolicy::RandomUniform,
                };
                sync_time_to_target(&model, &params, &cfg, target)
            })
            .collect::<Result<Vec<_>, _>>()?;
        summarize(&mut text, "sync", &hits);
        for (t, h) in hits.iter().enumerate() {
            let (tts, best) = fmt_hit(h);
            rows.push(("sync".into(), t, tts, best));
        }
    }

    text.push_str("engine,trial,tts,best_energy\n");
    for (engine, trial, tts, best) in &rows {
        writeln!(text, "{engine},{trial},{tts},{best}").unwrap();
    }
    emit(args.out.as_deref(), &text)
}

fn summarize(text: &mut String, label: &str, hits: &[FirstHit]) {
    let tts: Vec<f64> = hits
        .iter()
        .map(|h| h.time.unwrap_or(f64::INFINITY))
        .collect();
    let hit_count = hits.iter().filter(|h| h.time.is_some()).count();
    let med = median(&tts).unwrap_or(f64::NAN);
    writeln!(text, "# median_{label} {med}").unwrap();
    writeln!(
        text,
        "# hit_rate_{label} {}",
        hit_count as f64 / hits.len() as f64
    )
    .unwrap();
}
