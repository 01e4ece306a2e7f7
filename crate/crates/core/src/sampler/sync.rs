//! Synchronous random-scan Gibbs sampling.
//!
//! One uniformly chosen site is resampled from its exact conditional per
//! update, and each update costs one tick of the shared clock (`1/lambda0`
//! seconds of wall time). This is the serial baseline the asynchronous
//! engine is compared against: per unit wall time it performs one update
//! while the asynchronous array attempts flips on all neurons in parallel.

use crate::model::{IsingModel, SpinState};
use crate::sampler::engine::{InitPolicy, RunSummary, SamplerError};
use crate::sampler::params::{validate_params, NeuronParams};
use crate::sampler::trace::{pack_values, SnapshotTrace};
use crate::seed::derive_rng;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncLength {
    /// Total single-site updates.
    Updates(u64),
    /// Sweeps of `n` updates each.
    Sweeps(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyncConfig {
    pub length: SyncLength,
    pub seed: u64,
    pub init: InitPolicy,
}

/// Observer hook for streaming synchronous runs.
pub trait SyncVisitor {
    /// Called after every update, including no-ops on clamped or dead sites.
    /// Returning `false` stops the run at this update.
    fn on_update(
        &mut self,
        time: f64,
        step: u64,
        neuron: usize,
        value: i8,
        changed: bool,
        state: &[i8],
    ) -> bool;
}

fn shared_rate(params: &[NeuronParams]) -> Result<f64, SamplerError> {
    let lambda0 = params[0].lambda0;
    if params.iter().any(|p| p.lambda0 != lambda0) {
        return Err(SamplerError::MixedSyncRates);
    }
    Ok(lambda0)
}

/// Runs the synchronous sampler, streaming updates into `visitor`.
pub fn run_sync_visit<V: SyncVisitor>(
    model: &IsingModel,
    params: &[NeuronParams],
    cfg: &SyncConfig,
    visitor: &mut V,
) -> Result<RunSummary, SamplerError> {
    validate_params(model.n(), params)?;
    let lambda0 = shared_rate(params)?;
    let n = model.n();
    let updates = match cfg.length {
        SyncLength::Updates(u) => u,
        SyncLength::Sweeps(s) => s * n as u64,
    };
    let tick = 1.0 / lambda0;
    let domain = model.domain();

    let mut rng = derive_rng(cfg.seed, "sync-engine", 0);
    let mut values = super::engine::initial_values(model, params, &cfg.init, &mut rng)?;

    let mut performed: u64 = 0;
    let mut final_time = 0.0f64;
    let mut stopped_by_visitor = false;
    for step in 0..updates {
        let i = rng.random_range(0..n);
        let time = (step + 1) as f64 * tick;
        let p = &params[i];
        let (value, changed) = if p.clamp == super::params::Clamp::Free && !p.dead {
            let u = model.logit_drive(&values, i);
            let x: f64 = rng.random();
            let new = if x < p.prob_up(u) {
                domain.up()
            } else {
                domain.down()
            };
            let changed = new != values[i];
            values[i] = new;
            (new, changed)
        } else {
            (values[i], false)
        };
        performed += 1;
        final_time = time;
        if !visitor.on_update(time, step, i, value, changed, &values) {
            stopped_by_visitor = true;
            break;
        }
    }
    if !stopped_by_visitor {
        final_time = updates as f64 * tick;
    }

    Ok(RunSummary {
        final_state: SpinState::new(domain, values)?,
        final_time,
        events: performed,
        stopped_by_visitor,
    })
}

struct SnapshotCollector {
    snap: SnapshotTrace,
}

impl SyncVisitor for SnapshotCollector {
    fn on_update(
        &mut self,
        _time: f64,
        _step: u64,
        _neuron: usize,
        _value: i8,
        _changed: bool,
        state: &[i8],
    ) -> bool {
        self.snap
            .push_packed(pack_values(state, self.snap.domain()));
        true
    }
}

/// Runs the synchronous sampler and returns the per-update snapshot trace
/// (the initial state plus one snapshot per update).
pub fn run_sync(
    model: &IsingModel,
    params: &[NeuronParams],
    cfg: &SyncConfig,
) -> Result<SnapshotTrace, SamplerError> {
    validate_params(model.n(), params)?;
    let lambda0 = shared_rate(params)?;
    let mut rng = derive_rng(cfg.seed, "sync-engine", 0);
    let initial = initial_state_of(model, params, cfg, &mut rng)?;
    let mut snap = SnapshotTrace::new(model.domain(), model.n(), 0.0, 1.0 / lambda0);
    snap.push(&initial);
    let mut collector = SnapshotCollector { snap };
    run_sync_visit(model, params, cfg, &mut collector)?;
    Ok(collector.snap)
}

fn initial_state_of(
    model: &IsingModel,
    params: &[NeuronParams],
    cfg: &SyncConfig,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> Result<SpinState, SamplerError> {
    Ok(SpinState::new(
        model.domain(),
        super::engine::initial_values(model, params, &cfg.init, rng)?,
    )?)
}
