//! Multiplier-free generative learning: contrastive-divergence training of
//! grid Boltzmann machines on binary images, activation imaging, and
//! clamped reconstruction.

pub mod cd;
pub mod dataset;
pub mod idx;
pub mod synthetic;

use thiserror::Error;

use crate::model::ModelError;
use crate::sampler::SamplerError;

#[derive(Debug, Error)]
pub enum MlError {
    #[error("bad IDX magic: expected {expected:#010x}, got {got:#010x}")]
    BadMagic { expected: u32, got: u32 },
    #[error("IDX payload truncated: need {need} bytes, have {have}")]
    Truncated { need: usize, have: usize },
    #[error("{images} images but {labels} labels")]
    CountMismatch { images: usize, labels: usize },
    #[error("expected {expected}x{expected} images, got {rows}x{cols}")]
    BadDimensions {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("batch is empty")]
    EmptyBatch,
    #[error("batch item has {got} pixels but the model has {expected} spins")]
    BatchShape { expected: usize, got: usize },
    #[error("invalid training config: {0}")]
    BadConfig(String),
    #[error("training diverged: mean |w| = {mean_abs_w} exceeds bound {bound}")]
    Diverged { mean_abs_w: f64, bound: f64 },
    #[error("clamp mask and values must both have one entry per spin")]
    ClampShape,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

pub use cd::{
    cd_step, mean_activation, model_expectations, reconstruct, train, EpochDiagnostics,
    Expectations, ReconstructionReport, StepDiagnostics, TrainConfig,
};
pub use dataset::{dataset_from_idx_bytes, downsample_area, BinaryDataset};
pub use idx::{
    parse_idx_images, parse_idx_labels, write_idx_images, write_idx_labels, IdxImages,
};
pub use synthetic::synthetic_digits;
