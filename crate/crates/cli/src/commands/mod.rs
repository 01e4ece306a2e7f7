//! Subcommand implementations and small helpers they share.

pub mod acf;
pub mod bench;
pub mod cal;
pub mod delay;
pub mod fly;
pub mod oracle;
pub mod optimize;
pub mod reconstruct;
pub mod runfile;
pub mod sample;
pub mod traincd;

use crate::error::CliError;
use clap::ValueEnum;
use pbit_core::sampler::{
    ideal_params, make_varied_params, InitPolicy, NeuronParams, VariationSpec,
};
use pbit_core::IsingModel;
use std::path::Path;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum EngineArg {
    Async,
    Sync,
}

impl EngineArg {
    pub fn label(self) -> &'static str {
        match self {
            EngineArg::Async => "async",
            EngineArg::Sync => "sync",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum EngineSelArg {
    Async,
    Sync,
    Both,
}

impl EngineSelArg {
    pub fn label(self) -> &'static str {
        match self {
            EngineSelArg::Async => "async",
            EngineSelArg::Sync => "sync",
            EngineSelArg::Both => "both",
        }
    }

    pub fn wants_async(self) -> bool {
        matches!(self, EngineSelArg::Async | EngineSelArg::Both)
    }

    pub fn wants_sync(self) -> bool {
        matches!(self, EngineSelArg::Sync | EngineSelArg::Both)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum ProblemArg {
    Maxcut,
    Sk,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum FormArg {
    PureExp,
    ExpOverN,
}

impl FormArg {
    pub fn to_core(self) -> pbit_core::analysis::FitForm {
        match self {
            FormArg::PureExp => pbit_core::analysis::FitForm::PureExp,
            FormArg::ExpOverN => pbit_core::analysis::FitForm::ExpOverN,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum InitArg {
    /// Independent fair-coin start for every neuron.
    Random,
    /// All neurons start down.
    Down,
}

impl InitArg {
    pub fn label(self) -> &'static str {
        match self {
            InitArg::Random => "random",
            InitArg::Down => "down",
        }
    }

    pub fn to_policy(self) -> InitPolicy {
        match self {
            InitArg::Random => InitPolicy::RandomUniform,
            InitArg::Down => InitPolicy::AllDown,
        }
    }
}

/// Reads and parses a model file.
pub fn load_model(path: &Path) -> Result<IsingModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(pbit_core::modelfile::parse_model(&text)?)
}

/// Builds per-neuron parameters, applying device variation when any spread
/// is nonzero.
pub fn build_params(
    n: usize,
    lambda0: f64,
    slope_sd: f64,
    offset_sd: f64,
    dead_prob: f64,
    seed: u64,
) -> Result<Vec<NeuronParams>, CliError> {
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(CliError::config(format!(
            "--lambda0 must be positive and finite, got {lambda0}"
        )));
    }
    if slope_sd == 0.0 && offset_sd == 0.0 && dead_prob == 0.0 {
        return Ok(ideal_params(n, lambda0));
    }
    for (name, v) in [
        ("--slope-sd", slope_sd),
        ("--offset-sd", offset_sd),
        ("--dead-prob", dead_prob),
    ] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::config(format!(
                "{name} must be nonnegative and finite, got {v}"
            )));
        }
    }
    if dead_prob > 1.0 {
        return Err(CliError::config(format!(
            "--dead-prob must be at most 1, got {dead_prob}"
        )));
    }
    let spec = VariationSpec {
        slope_sd,
        offset_sd,
        dead_prob,
    };
    Ok(make_varied_params(n, lambda0, &spec, seed))
}

/// Joins a list with commas for header lines.
pub fn join_list(items: &[impl std::fmt::Display]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
