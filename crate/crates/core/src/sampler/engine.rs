//! Asynchronous continuous-time sampling engine.
//!
//! Every free neuron carries an exponential alarm clock. A neuron in state
//! `s` fires at rate `lambda0 * P(opposite | viewed neighbors)`, which makes
//! the embedded jump chain satisfy detailed balance with respect to the
//! Boltzmann distribution when the viewed neighbor values are current. The
//! engine keeps one tentative firing time per neuron in a priority queue;
//! whenever a neuron's viewed field changes, its pending alarm is invalidated
//! (lazily, via a generation counter) and redrawn, which is statistically
//! sound because the exponential distribution is memoryless.
//!
//! A positive `tau_circ` models the finite propagation delay of the coupling
//! circuit: a flip at time `t` is not seen by neighbors until `t + tau_circ`.
//! Delayed field updates ride through the same queue, so the whole run stays
//! a single deterministic event stream.

use crate::model::{IsingModel, ModelError, SpinState};
use crate::sampler::params::{validate_params, Clamp, NeuronParams, ParamError};
use crate::sampler::trace::{Event, EventTrace, TraceMeta};
use crate::seed::derive_rng;
use rand::Rng;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("stop time must be positive and finite, got {0}")]
    BadStopTime(f64),
    #[error("coupling delay must be non-negative and finite, got {0}")]
    BadDelay(f64),
    #[error("synchronous updates need one shared clock; lambda0 differs between neurons")]
    MixedSyncRates,
}

/// When to end a run. Exactly one rule is active.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Stop after this many applied flips; the trace ends at the last flip.
    MaxEvents(u64),
    /// Stop at this simulated time (seconds).
    MaxTime(f64),
}

/// How to choose the state at time zero. Clamped neurons override whatever
/// the policy assigns.
#[derive(Debug, Clone, PartialEq)]
pub enum InitPolicy {
    Fixed(SpinState),
    /// Each spin up with probability 1/2.
    RandomUniform,
    AllDown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsyncConfig {
    pub stop: StopRule,
    pub seed: u64,
    /// Coupling-circuit propagation delay in seconds (0 = instantaneous).
    pub tau_circ: f64,
    pub init: InitPolicy,
}

impl AsyncConfig {
    /// Random start, no delay, stop after `events` flips.
    pub fn events(events: u64, seed: u64) -> Self {
        AsyncConfig {
            stop: StopRule::MaxEvents(events),
            seed,
            tau_circ: 0.0,
            init: InitPolicy::RandomUniform,
        }
    }

    /// Random start, no delay, stop at simulated time `t`.
    pub fn until(t: f64, seed: u64) -> Self {
        AsyncConfig {
            stop: StopRule::MaxTime(t),
            seed,
            tau_circ: 0.0,
            init: InitPolicy::RandomUniform,
        }
    }
}

/// Observer hook for streaming runs that should not materialize a trace.
pub trait EventVisitor {
    /// Called after each applied flip with the post-flip state vector.
    /// Returning `false` stops the run at this event.
    fn on_event(&mut self, time: f64, neuron: usize, value: i8, state: &[i8]) -> bool;
}

/// Outcome of a visitor-driven run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub final_state: SpinState,
    pub final_time: f64,
    pub events: u64,
    pub stopped_by_visitor: bool,
}

#[derive(Debug, Clone, Copy)]
enum Action {
    /// Tentative flip of `neuron`, valid only while its generation matches.
    Fire { neuron: u32, generation: u32 },
    /// Delayed field update: neighbor sum of `neuron` changes by `delta`.
    Field { neuron: u32, delta: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Scheduled {
    time: f64,
    seq: u64,
    action: Action,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.time.total_cmp(&other.time).is_eq() && self.seq == other.seq
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Ties in time break by insertion order, keeping runs deterministic.
        self.time
            .total_cmp(&other.time)
            .then(self.seq.cmp(&other.seq))
    }
}

struct Engine<'a> {
    model: &'a IsingModel,
    params: &'a [NeuronParams],
    values: Vec<i8>,
    /// Viewed neighbor sums (delayed by tau_circ when it is positive).
    viewed: Vec<f64>,
    generation: Vec<u32>,
    heap: BinaryHeap<Reverse<Scheduled>>,
    seq: u64,
    rng: rand_chacha::ChaCha12Rng,
}

impl<'a> Engine<'a> {
    fn active(&self, i: usize) -> bool {
        self.params[i].clamp == Clamp::Free && !self.params[i].dead
    }

    fn rate(&self, i: usize) -> f64 {
        let p = &self.params[i];
        let model = self.model;
        let u = -model.domain().width()
            * model.sign().factor()
            * (self.viewed[i] + model.bias(i));
        let p_up = p.prob_up(u);
        let p_opp = if self.values[i] == model.domain().up() {
            1.0 - p_up
        } else {
            p_up
        };
        p.lambda0 * p_opp
    }

    /// Invalidates any pending alarm for neuron `i` and draws a fresh one.
    fn schedule(&mut self, i: usize, now: f64) {
        self.generation[i] += 1;
        let rate = self.rate(i);
        if !(rate > 0.0) || !rate.is_finite() {
            return;
        }
        let x: f64 = self.rng.random();
        let dt = -(1.0 - x).ln() / rate;
        if !dt.is_finite() {
            return;
        }
        self.seq += 1;
        self.heap.push(Reverse(Scheduled {
            time: now + dt,
            seq: self.seq,
            action: Action::Fire {
                neuron: i as u32,
                generation: self.generation[i],
            },
        }));
    }

    fn push_field(&mut self, j: usize, delta: f64, at: f64) {
        self.seq += 1;
        self.heap.push(Reverse(Scheduled {
            time: at,
            seq: self.seq,
            action: Action::Field {
                neuron: j as u32,
                delta,
            },
        }));
    }
}

pub(crate) fn initial_values(
    model: &IsingModel,
    params: &[NeuronParams],
    init: &InitPolicy,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> Result<Vec<i8>, SamplerError> {
    let domain = model.domain();
    let mut values = match init {
        InitPolicy::Fixed(s) => {
            if s.len() != model.n() {
                return Err(ModelError::DimensionMismatch {
                    expected: model.n(),
                    got: s.len(),
                }
                .into());
            }
            if s.domain() != domain {
                return Err(ModelError::DomainMismatch.into());
            }
            s.values().to_vec()
        }
        InitPolicy::RandomUniform => (0..model.n())
            .map(|_| {
                if rng.random::<bool>() {
                    domain.up()
                } else {
                    domain.down()
                }
            })
            .collect(),
        InitPolicy::AllDown => vec![domain.down(); model.n()],
    };
    for (i, p) in params.iter().enumerate() {
        match p.clamp {
            Clamp::Free => {}
            Clamp::Down => values[i] = domain.down(),
            Clamp::Up => values[i] = domain.up(),
        }
    }
    Ok(values)
}

fn validate_config(cfg: &AsyncConfig) -> Result<(), SamplerError> {
    if let StopRule::MaxTime(t) = cfg.stop {
        if !(t > 0.0 && t.is_finite()) {
            return Err(SamplerError::BadStopTime(t));
        }
    }
    if !(cfg.tau_circ >= 0.0 && cfg.tau_circ.is_finite()) {
        return Err(SamplerError::BadDelay(cfg.tau_circ));
    }
    Ok(())
}

/// Runs the asynchronous engine, streaming flips into `visitor`.
pub fn run_async_visit<V: EventVisitor>(
    model: &IsingModel,
    params: &[NeuronParams],
    cfg: &AsyncConfig,
    visitor: &mut V,
) -> Result<RunSummary, SamplerError> {
    validate_params(model.n(), params)?;
    validate_config(cfg)?;
    let mut rng = derive_rng(cfg.seed, "async-engine", 0);
    let values = initial_values(model, params, &cfg.init, &mut rng)?;

    let n = model.n();
    let mut viewed = vec![0.0f64; n];
    for (i, v) in viewed.iter_mut().enumerate() {
        *v = model
            .neighbors(i)
            .iter()
            .map(|&(j, w)| w * values[j] as f64)
            .sum();
    }

    let mut engine = Engine {
        model,
        params,
        values,
        viewed,
        generation: vec![0; n],
        heap: BinaryHeap::new(),
        seq: 0,
        rng,
    };

    let domain = model.domain();
    let mut events: u64 = 0;
    let mut last_event_time = 0.0f64;
    let mut final_time: Option<f64> = None;
    let mut stopped_by_visitor = false;

    if let StopRule::MaxEvents(0) = cfg.stop {
        return Ok(RunSummary {
            final_state: SpinState::new(domain, engine.values)?,
            final_time: 0.0,
            events: 0,
            stopped_by_visitor: false,
        });
    }

    for i in 0..n {
        if engine.active(i) {
            engine.schedule(i, 0.0);
        }
    }

    while let Some(Reverse(sch)) = engine.heap.pop() {
        if let StopRule::MaxTime(t_max) = cfg.stop {
            if sch.time > t_max {
                final_time = Some(t_max);
                break;
            }
        }
        match sch.action {
            Action::Fire { neuron, generation } => {
                let i = neuron as usize;
                if generation != engine.generation[i] {
                    continue;
                }
                let old = engine.values[i];
                let new = domain.flipped(old);
                engine.values[i] = new;
                events += 1;
                last_event_time = sch.time;
                if !visitor.on_event(sch.time, i, new, &engine.values) {
                    final_time = Some(sch.time);
                    stopped_by_visitor = true;
                    break;
                }
                if let StopRule::MaxEvents(max) = cfg.stop {
                    if events >= max {
                        final_time = Some(sch.time);
                        break;
                    }
                }
                engine.schedule(i, sch.time);
                let delta = (new - old) as f64;
                let model_ref = engine.model;
                for &(j, w) in model_ref.neighbors(i) {
                    if !engine.active(j) {
                        continue;
                    }
                    let dv = w * delta;
                    if cfg.tau_circ == 0.0 {
                        engine.viewed[j] += dv;
                        engine.schedule(j, sch.time);
                    } else {
                        engine.push_field(j, dv, sch.time + cfg.tau_circ);
                    }
                }
            }
            Action::Field { neuron, delta } => {
                let j = neuron as usize;
                engine.viewed[j] += delta;
                engine.schedule(j, sch.time);
            }
        }
    }

    let final_time = final_time.unwrap_or(match cfg.stop {
        // Queue drained (everything clamped or dead) before the rule tripped.
        StopRule::MaxTime(t) => t,
        StopRule::MaxEvents(_) => last_event_time,
    });

    Ok(RunSummary {
        final_state: SpinState::new(domain, engine.values)?,
        final_time,
        events,
        stopped_by_visitor,
    })
}

struct Collector {
    events: Vec<Event>,
}

impl EventVisitor for Collector {
    fn on_event(&mut self, time: f64, neuron: usize, value: i8, _state: &[i8]) -> bool {
        self.events.push(Event {
            time,
            neuron: neuron as u32,
            value,
        });
        true
    }
}

/// Runs the asynchronous engine and materializes the full event trace.
pub fn run_async(
    model: &IsingModel,
    params: &[NeuronParams],
    cfg: &AsyncConfig,
) -> Result<EventTrace, SamplerError> {
    validate_params(model.n(), params)?;
    validate_config(cfg)?;
    // Reconstruct the initial state exactly as the run will: same stream.
    let mut rng = derive_rng(cfg.seed, "async-engine", 0);
    let initial = SpinState::new(
        model.domain(),
        initial_values(model, params, &cfg.init, &mut rng)?,
    )?;
    let mut collector = Collector { events: Vec::new() };
    let summary = run_async_visit(model, params, cfg, &mut collector)?;
    let meta = TraceMeta {
        lambda0: params[0].lambda0,
        seed: cfg.seed,
        tau_circ: cfg.tau_circ,
    };
    Ok(EventTrace::new(meta, initial, collector.events, summary.final_time))
}
