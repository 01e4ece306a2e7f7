//! Insect-style decision making: a ring-attractor Boltzmann network over
//! goal vectors steers an agent among targets, with per-step re-sampling,
//! optional memory of the previous network state, and ensemble tools for
//! locating where trajectories commit to one option.

pub mod bifurcation;
pub mod fly;

use thiserror::Error;

use crate::model::ModelError;
use crate::sampler::SamplerError;

#[derive(Debug, Error)]
pub enum NeuroError {
    #[error("at least one target is required")]
    NoTargets,
    #[error("{n} neurons cannot be split evenly over {k} targets")]
    IndivisibleNeurons { n: usize, k: usize },
    #[error("invalid world: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

pub use bifurcation::{choice_counts, choice_entropy, first_split, two_means, EnsembleSplit};
pub use fly::{
    build_fly_model, couplings_from_angles, goal_vectors, simulate_trajectory, velocity,
    FlyStep, FlyWorld, Termination, Trajectory,
};
