//! Discrete-event simulation of asynchronous probabilistic-bit (p-bit) Ising
//! machines, together with the analysis and application layers needed to
//! study them: exact enumeration oracles, autocorrelation and time-to-solution
//! statistics, scaling fits, combinatorial optimization benchmarks,
//! contrastive-divergence training, and a goal-vector navigation model.
//!
//! The simulator supports two update disciplines over the same energy model:
//!
//! * an asynchronous continuous-time engine in which every neuron carries an
//!   independent Poisson clock and flips at a rate proportional to the
//!   conditional probability of the opposite state, and
//! * a conventional synchronous random-scan Gibbs sampler that performs one
//!   update per clock tick.
//!
//! Hardware-fidelity options (per-neuron sigmoid variation, clamping, dead
//! neurons, finite coupling-update delay, quantized weights) are layered on
//! top so that idealized and device-like behavior can be compared in one
//! framework.

pub mod analysis;
pub mod math;
pub mod ml;
pub mod model;
pub mod modelfile;
pub mod neuro;
pub mod opt;
pub mod quantize;
pub mod sampler;
pub mod seed;
pub mod topology;

pub use model::{EnergySign, IsingModel, ModelError, SpinDomain, SpinState};
pub use sampler::{AsyncConfig, EventTrace, NeuronParams, SnapshotTrace, StopRule};
