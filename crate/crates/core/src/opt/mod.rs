//! Optimization workloads: random MaxCut and Sherrington-Kirkpatrick
//! instances, greedy local search for reference optima, the mask-encoding
//! demo, and the synchronous-vs-asynchronous time-to-solution benchmark.

pub mod bench;
pub mod cal;
pub mod graphs;
pub mod search;

use thiserror::Error;

use crate::analysis::scaling::FitError;
use crate::analysis::AnalysisError;
use crate::model::ModelError;
use crate::sampler::SamplerError;
use crate::topology::TopologyError;

#[derive(Debug, Error)]
pub enum OptError {
    #[error("need at least two vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge probability must lie in [0, 1], got {0}")]
    BadEdgeProbability(f64),
    #[error("graph edge ({i}, {j}) is invalid for {n} vertices")]
    BadEdge { i: usize, j: usize, n: usize },
    #[error("duplicate edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },
    #[error("edge weights must be finite")]
    NonFiniteWeight,
    #[error("suite needs at least one size, instance, and trial")]
    EmptySuite,
    #[error("rates, scales, and budgets must be positive and finite")]
    BadSuiteParameter,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

pub use bench::{run_scaling_suite, EngineKind, ProblemKind, SuiteConfig, SuiteOutcome, TrialRow};
pub use cal::{run_cal_demo, CalDemoConfig, CalDemoReport};
pub use graphs::{
    cut_value, gen_maxcut, gen_sk, maxcut_to_ising, EdgeFill, MaxcutEncoding, WeightScheme,
    WeightedGraph,
};
pub use search::{best_known_energy, descent_minimum, steepest_descent};
