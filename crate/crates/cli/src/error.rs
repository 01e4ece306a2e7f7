//! Error type shared by all subcommands, with stable process exit codes.
//!
//! Exit code map:
//! - `0` success
//! - `2` configuration errors (bad flags, malformed input files, invalid
//!   parameter combinations) — clap's own usage errors also exit with 2
//! - `3` I/O errors (missing files, unwritable output paths)
//! - `4` numeric failures (fits that do not converge, diverging training,
//!   non-finite results)

use pbit_core::analysis::{AnalysisError, FitError};
use pbit_core::ml::MlError;
use pbit_core::model::ModelError;
use pbit_core::modelfile::ModelFileError;
use pbit_core::neuro::NeuroError;
use pbit_core::opt::OptError;
use pbit_core::sampler::{CalibrationError, ParamError, SamplerError, TraceError};
use pbit_core::topology::TopologyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    /// Process exit code for this error class.
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CliError::Numeric(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ModelFileError> for CliError {
    fn from(e: ModelFileError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<TopologyError> for CliError {
    fn from(e: TopologyError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SamplerError> for CliError {
    fn from(e: SamplerError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<TraceError> for CliError {
    fn from(e: TraceError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<CalibrationError> for CliError {
    fn from(e: CalibrationError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Model(m) => m.into(),
            AnalysisError::Sampler(s) => s.into(),
            AnalysisError::TooManySpins { .. }
            | AnalysisError::LengthMismatch { .. }
            | AnalysisError::ClampLength { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<OptError> for CliError {
    fn from(e: OptError) -> Self {
        match e {
            OptError::Model(m) => m.into(),
            OptError::Topology(t) => t.into(),
            OptError::Sampler(s) => s.into(),
            OptError::Analysis(a) => a.into(),
            OptError::Fit(f) => f.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<MlError> for CliError {
    fn from(e: MlError) -> Self {
        match e {
            MlError::Model(m) => m.into(),
            MlError::Sampler(s) => s.into(),
            MlError::Diverged { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<NeuroError> for CliError {
    fn from(e: NeuroError) -> Self {
        match e {
            NeuroError::Model(m) => m.into(),
            NeuroError::Sampler(s) => s.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<toml::de::Error> for CliError {
    fn from(e: toml::de::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
