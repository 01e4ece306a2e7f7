//! Paired synchronous-vs-asynchronous time-to-solution benchmark.
//!
//! Both engines run the same instances at the same per-neuron rate λ0: the
//! asynchronous engine is the continuous-time chain (all neurons firing in
//! parallel), the synchronous one performs a single site update per 1/λ0
//! tick. Each trial is one fresh chain with no restarts; its time to
//! solution is the first moment the energy reaches the instance's recorded
//! optimum, or infinity if the budget expires first.

use rayon::prelude::*;

use super::graphs::{gen_maxcut, gen_sk, maxcut_to_ising, EdgeFill, WeightScheme};
use super::search::best_known_energy;
use super::OptError;
use crate::analysis::scaling::{fit_scaling, FitForm, ScalingReport, SizeSamples};
use crate::analysis::tts::{async_time_to_target, sync_time_to_target};
use crate::model::IsingModel;
use crate::sampler::{
    ideal_params, AsyncConfig, InitPolicy, StopRule, SyncConfig, SyncLength,
};
use crate::seed::derive_u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// Complete-graph ±1-weight MaxCut instances.
    MaxCut,
    /// Sherrington-Kirkpatrick instances (complete graph, normal couplings).
    Sk,
}

impl ProblemKind {
    pub fn label(self) -> &'static str {
        match self {
            ProblemKind::MaxCut => "maxcut",
            ProblemKind::Sk => "sk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Async,
    Sync,
}

impl EngineKind {
    pub fn label(self) -> &'static str {
        match self {
            EngineKind::Async => "async",
            EngineKind::Sync => "sync",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub kind: ProblemKind,
    pub sizes: Vec<usize>,
    /// Instances per size.
    pub instances: usize,
    /// Fresh chains per instance and engine.
    pub trials: usize,
    /// Per-neuron rate (Hz) shared by both engines.
    pub lambda0: f64,
    /// Factor applied to instance couplings before sampling (inverse
    /// temperature); the recorded optimum scales with it.
    pub coupling_scale: f64,
    /// Per-trial simulated-seconds budget; trials that do not reach the
    /// optimum in time score infinity.
    pub max_sim_time: f64,
    /// Restart count for the local-search optimum on instances too large
    /// to enumerate.
    pub descent_restarts: usize,
    /// Bootstrap resamples for the scaling fits.
    pub resamples: usize,
    pub form: FitForm,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRow {
    pub size: usize,
    pub instance: usize,
    pub trial: usize,
    pub engine: EngineKind,
    /// Seconds to first hit, or infinity on a miss.
    pub tts: f64,
    /// Lowest energy the trial reached.
    pub best_energy: f64,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub async_report: ScalingReport,
    pub sync_report: ScalingReport,
    /// Every trial, ordered by (size, instance, trial, engine).
    pub rows: Vec<TrialRow>,
    /// Recorded target energy per (size, instance), after coupling scaling.
    pub targets: Vec<(usize, usize, f64)>,
    /// Diagnostics for instances excluded because no usable optimum was
    /// recorded.
    pub excluded: Vec<String>,
}

fn validate(cfg: &SuiteConfig) -> Result<(), OptError> {
    if cfg.sizes.is_empty() || cfg.instances == 0 || cfg.trials == 0 {
        return Err(OptError::EmptySuite);
    }
    let positive =
        |x: f64| x.is_finite() && x > 0.0;
    if !positive(cfg.lambda0) || !positive(cfg.coupling_scale) || !positive(cfg.max_sim_time) {
        return Err(OptError::BadSuiteParameter);
    }
    Ok(())
}

fn build_instance(kind: ProblemKind, n: usize, seed: u64) -> Result<IsingModel, OptError> {
    match kind {
        ProblemKind::MaxCut => Ok(maxcut_to_ising(&gen_maxcut(
            n,
            EdgeFill::Complete,
            WeightScheme::PlusMinusUnit,
            seed,
        )?)?
        .model),
        ProblemKind::Sk => gen_sk(n, seed),
    }
}

/// Runs the full paired benchmark and fits both scaling laws.
///
/// Trials run in parallel; every trial draws from a seed derived from the
/// suite seed and its own coordinates, so the outcome is byte-identical
/// regardless of thread count.
pub fn run_scaling_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome, OptError> {
    validate(cfg)?;
    let mut excluded = Vec::new();
    let mut targets = Vec::new();
    // (size, instance, model, target energy)
    let mut problems: Vec<(usize, usize, IsingModel, f64)> = Vec::new();
    for (si, &n) in cfg.sizes.iter().enumerate() {
        for inst in 0..cfg.instances {
            let flat = (si * cfg.instances + inst) as u64;
            let raw = build_instance(cfg.kind, n, derive_u64(cfg.seed, "bench-instance", flat))?;
            let model = raw.scaled(cfg.coupling_scale);
            let target = best_known_energy(
                &model,
                cfg.descent_restarts,
                derive_u64(cfg.seed, "bench-descent", flat),
            )?;
            if !target.is_finite() {
                excluded.push(format!(
                    "size {n} instance {inst}: no finite optimum recorded"
                ));
                continue;
            }
            targets.push((n, inst, target));
            problems.push((n, inst, model, target));
        }
    }

    let sync_updates = (cfg.max_sim_time * cfg.lambda0).floor() as u64;
    // One flat job per (problem, trial, engine); decode by arithmetic so the
    // collected order is fixed and every job derives its own seed.
    let total_jobs = problems.len() * cfg.trials * 2;
    let rows: Vec<TrialRow> = (0..total_jobs)
        .into_par_iter()
        .map(|job| {
            let engine = if job % 2 == 0 {
                EngineKind::Async
            } else {
                EngineKind::Sync
            };
            let trial_flat = job / 2;
            let pi = trial_flat / cfg.trials;
            let trial = trial_flat % cfg.trials;
            let (n, inst, model, target) = &problems[pi];
            let params = ideal_params(model.n(), cfg.lambda0);
            let hit = match engine {
                EngineKind::Async => async_time_to_target(
                    model,
                    &params,
                    &AsyncConfig {
                        stop: StopRule::MaxTime(cfg.max_sim_time),
                        seed: derive_u64(cfg.seed, "bench-async-trial", trial_flat as u64),
                        tau_circ: 0.0,
                        init: InitPolicy::RandomUniform,
                    },
                    *target,
                ),
                EngineKind::Sync => sync_time_to_target(
                    model,
                    &params,
                    &SyncConfig {
                        length: SyncLength::Updates(sync_updates),
                        seed: derive_u64(cfg.seed, "bench-sync-trial", trial_flat as u64),
                        init: InitPolicy::RandomUniform,
                    },
                    *target,
                ),
            }
            .expect("validated benchmark trial cannot fail");
            TrialRow {
                size: *n,
                instance: *inst,
                trial,
                engine,
                tts: hit.time.unwrap_or(f64::INFINITY),
                best_energy: hit.best_energy,
            }
        })
        .collect();

    let collect_samples = |engine: EngineKind| -> Vec<SizeSamples> {
        cfg.sizes
            .iter()
            .map(|&n| SizeSamples {
                size: n,
                tts: rows
                    .iter()
                    .filter(|r| r.size == n && r.engine == engine)
                    .map(|r| r.tts)
                    .collect(),
            })
            .collect()
    };
    let async_report = fit_scaling(
        cfg.form,
        &collect_samples(EngineKind::Async),
        cfg.resamples,
        derive_u64(cfg.seed, "bench-bootstrap-async", 0),
    )?;
    let sync_report = fit_scaling(
        cfg.form,
        &collect_samples(EngineKind::Sync),
        cfg.resamples,
        derive_u64(cfg.seed, "bench-bootstrap-sync", 0),
    )?;
    Ok(SuiteOutcome {
        async_report,
        sync_report,
        rows,
        targets,
        excluded,
    })
}
