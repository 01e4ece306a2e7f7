//! Time to solution: first moment a run's energy reaches a target.
//!
//! Energies are tracked incrementally (one local-field evaluation per flip),
//! refreshed exactly at regular intervals, and every candidate hit is
//! re-verified with a full energy evaluation, so drift can neither fake nor
//! lose a hit.

use super::AnalysisError;
use crate::model::IsingModel;
use crate::sampler::engine::{run_async_visit, AsyncConfig, EventVisitor};
use crate::sampler::sync::{run_sync_visit, SyncConfig, SyncVisitor};
use crate::sampler::{EventTrace, NeuronParams};
use crate::seed::derive_rng;

/// A state is a hit when its energy is at most `target + ENERGY_HIT_TOL`.
pub const ENERGY_HIT_TOL: f64 = 1e-9;

/// Margin above the hit threshold at which the incremental energy triggers
/// an exact re-evaluation, and cadence of unconditional refreshes.
const DRIFT_GUARD: f64 = 1e-6;
const REFRESH_EVERY: u64 = 4096;

/// Outcome of a first-hit run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstHit {
    /// Simulated seconds until the target was reached, if it was.
    pub time: Option<f64>,
    /// Best (lowest) energy seen during the run.
    pub best_energy: f64,
}

struct EnergyTracker<'a> {
    model: &'a IsingModel,
    target: f64,
    energy: f64,
    best: f64,
    since_refresh: u64,
    hit: Option<f64>,
}

impl<'a> EnergyTracker<'a> {
    fn new(model: &'a IsingModel, target: f64, initial_energy: f64) -> Self {
        EnergyTracker {
            model,
            target,
            energy: initial_energy,
            best: initial_energy,
            since_refresh: 0,
            hit: if initial_energy <= target + ENERGY_HIT_TOL {
                Some(0.0)
            } else {
                None
            },
        }
    }

    /// Applies one flip (post-flip `state`), returning `true` when the
    /// target was just reached.
    fn apply(&mut self, time: f64, neuron: usize, value: i8, state: &[i8]) -> bool {
        // The local field excludes the spin itself, so the post-flip state
        // gives the same field the pre-flip state would.
        let h = self.model.local_field_unchecked(state, neuron);
        let old = self.model.domain().flipped(value);
        self.energy += h * ((value - old) as f64);
        self.since_refresh += 1;
        if self.since_refresh >= REFRESH_EVERY {
            self.energy = self.model.energy_of_values(state);
            self.since_refresh = 0;
        }
        if self.energy <= self.target + ENERGY_HIT_TOL + DRIFT_GUARD {
            let exact = self.model.energy_of_values(state);
            self.energy = exact;
            self.since_refresh = 0;
            if exact <= self.target + ENERGY_HIT_TOL {
                self.hit = Some(time);
            }
        }
        self.best = self.best.min(self.energy);
        self.hit.is_some()
    }
}

/// First hit time in a recorded trace, or `None` if the target is never
/// reached (time zero counts if the initial state already qualifies).
pub fn trace_time_to_target(
    trace: &EventTrace,
    model: &IsingModel,
    target: f64,
) -> Result<Option<f64>, AnalysisError> {
    let initial_energy = model.energy(trace.initial())?;
    let mut tracker = EnergyTracker::new(model, target, initial_energy);
    if tracker.hit.is_some() {
        return Ok(Some(0.0));
    }
    let mut values = trace.initial().values().to_vec();
    for e in trace.events() {
        values[e.neuron as usize] = e.value;
        if tracker.apply(e.time, e.neuron as usize, e.value, &values) {
            return Ok(tracker.hit);
        }
    }
    Ok(None)
}

struct AsyncHitVisitor<'a> {
    tracker: EnergyTracker<'a>,
}

impl EventVisitor for AsyncHitVisitor<'_> {
    fn on_event(&mut self, time: f64, neuron: usize, value: i8, state: &[i8]) -> bool {
        !self.tracker.apply(time, neuron, value, state)
    }
}

/// Runs the asynchronous engine until the energy target is hit or the stop
/// rule fires, without materializing a trace.
pub fn async_time_to_target(
    model: &IsingModel,
    params: &[NeuronParams],
    cfg: &AsyncConfig,
    target: f64,
) -> Result<FirstHit, AnalysisError> {
    // Recover the initial state from the same stream the engine will use.
    let mut rng = derive_rng(cfg.seed, "async-engine", 0);
    let initial = crate::sampler::engine::initial_values(model, params, &cfg.init, &mut rng)?;
    let initial_energy = model.energy_of_values(&initial);
    let tracker = EnergyTracker::new(model, target, initial_energy);
    if tracker.hit.is_some() {
        return Ok(FirstHit {
            time: Some(0.0),
            best_energy: initial_energy,
        });
    }
    let mut visitor = AsyncHitVisitor { tracker };
    run_async_visit(model, params, cfg, &mut visitor)?;
    Ok(FirstHit {
        time: visitor.tracker.hit,
        best_energy: visitor.tracker.best,
    })
}

struct SyncHitVisitor<'a> {
    tracker: EnergyTracker<'a>,
}

impl SyncVisitor for SyncHitVisitor<'_> {
    fn on_update(
        &mut self,
        time: f64,
        _step: u64,
        neuron: usize,
        value: i8,
        changed: bool,
        state: &[i8],
    ) -> bool {
        if !changed {
            return true;
        }
        !self.tracker.apply(time, neuron, value, state)
    }
}

/// Synchronous counterpart of [`async_time_to_target`]; wall time advances
/// one clock tick per update.
pub fn sync_time_to_target(
    model: &IsingModel,
    params: &[NeuronParams],
    cfg: &SyncConfig,
    target: f64,
) -> Result<FirstHit, AnalysisError> {
    let mut rng = derive_rng(cfg.seed, "sync-engine", 0);
    let initial = crate::sampler::engine::initial_values(model, params, &cfg.init, &mut rng)?;
    let initial_energy = model.energy_of_values(&initial);
    let tracker = EnergyTracker::new(model, target, initial_energy);
    if tracker.hit.is_some() {
        return Ok(FirstHit {
            time: Some(0.0),
            best_energy: initial_energy,
        });
    }
    let mut visitor = SyncHitVisitor { tracker };
    run_sync_visit(model, params, cfg, &mut visitor)?;
    Ok(FirstHit {
        time: visitor.tracker.hit,
        best_energy: visitor.tracker.best,
    })
}
