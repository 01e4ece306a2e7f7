//! `pbit train-cd` — contrastive-divergence training of a Boltzmann machine.

use super::load_model;
use crate::error::CliError;
use crate::header::Header;
use crate::output::write_text;
use pbit_core::ml::{
    dataset_from_idx_bytes, mean_activation, synthetic_digits, train, write_idx_images,
    write_idx_labels, TrainConfig,
};
use pbit_core::model::{EnergySign, SpinDomain};
use pbit_core::modelfile::write_model;
use pbit_core::seed::derive_u64;
use pbit_core::topology::{build_kings_grid, GridFill};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct TrainCdArgs {
    /// Class label to train on (0-9).
    #[arg(long)]
    pub digit: u8,

    #[arg(long, default_value_t = 1)]
    pub epochs: usize,

    /// Learning rate.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Divide the learning rate by 1 + epoch index.
    #[arg(long, default_value_t = false)]
    pub alpha_decay: bool,

    #[arg(long, default_value_t = 256)]
    pub batch_size: usize,

    /// Expected per-neuron update opportunities in the model-statistics
    /// window of each step.
    #[arg(long, default_value_t = 2000)]
    pub model_samples: u64,

    #[arg(long, default_value_t = 150e6)]
    pub lambda0: f64,

    /// Abort training when the mean absolute weight exceeds this bound.
    #[arg(long, default_value_t = 50.0)]
    pub weight_bound: f64,

    /// IDX image file (28x28 grayscale); requires --idx-labels.
    #[arg(long, requires = "idx_labels", conflicts_with = "synthetic")]
    pub idx_images: Option<PathBuf>,

    /// IDX label file matching --idx-images.
    #[arg(long, requires = "idx_images", conflicts_with = "synthetic")]
    pub idx_labels: Option<PathBuf>,

    /// Use the built-in synthetic digit corpus instead of IDX files.
    #[arg(long, default_value_t = false)]
    pub synthetic: bool,

    /// Images per digit class in the synthetic corpus.
    #[arg(long, default_value_t = 50)]
    pub per_digit: usize,

    /// Target image side after area downsampling.
    #[arg(long, default_value_t = 16)]
    pub side: usize,

    /// Binarization threshold on [0,1] gray levels.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,

    /// Starting model (defaults to a zero-weight king's-move grid).
    #[arg(long)]
    pub start_model: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Trained model file.
    #[arg(long)]
    pub out: PathBuf,

    /// Optional per-epoch diagnostics CSV.
    #[arg(long)]
    pub diag: Option<PathBuf>,

    /// Optional mean-activation grid CSV for the trained model.
    #[arg(long)]
    pub activations: Option<PathBuf>,

    /// Sampling window for the activation grid.
    #[arg(long, default_value_t = 4000)]
    pub activation_samples: u64,
}

pub fn run(args: &TrainCdArgs) -> Result<(), CliError> {
    let (image_bytes, label_bytes) = if args.synthetic {
        let (images, labels) = synthetic_digits(args.per_digit, args.seed);
        (write_idx_images(&images), write_idx_labels(&labels))
    } else {
        match (&args.idx_images, &args.idx_labels) {
            (Some(ip), Some(lp)) => (std::fs::read(ip)?, std::fs::read(lp)?),
            _ => {
                return Err(CliError::config(
                    "provide --idx-images with --idx-labels, or --synthetic",
                ))
            }
        }
    };
    let dataset = dataset_from_idx_bytes(&image_bytes, &label_bytes, args.side, args.threshold)?;
    let class = dataset.filter_digit(args.digit);
    if class.is_empty() {
        return Err(CliError::config(format!(
            "no images labeled {} in the dataset",
            args.digit
        )));
    }

    let start = match &args.start_model {
        Some(path) => load_model(path)?,
        None => build_kings_grid(
            args.side,
            args.side,
            GridFill::Constant(0.0),
            SpinDomain::ZeroOne,
            EnergySign::Ferromagnetic,
        )?,
    };
    if start.n() != args.side * args.side {
        return Err(CliError::config(format!(
            "start model has {} spins but --side {} needs {}",
            start.n(),
            args.side,
            args.side * args.side
        )));
    }

    let cfg = TrainConfig {
        alpha: args.alpha,
        alpha_decay: args.alpha_decay,
        batch_size: args.batch_size,
        epochs: args.epochs,
        model_samples: args.model_samples,
        lambda0: args.lambda0,
        weight_bound: args.weight_bound,
        seed: args.seed,
    };
    let (trained, diagnostics) = train(&start, &class.images, &cfg)?;

    let source = if args.synthetic {
        format!("synthetic:{}", args.per_digit)
    } else {
        format!(
            "{}:{}",
            args.idx_images.as_ref().unwrap().display(),
            args.idx_labels.as_ref().unwrap().display()
        )
    };
    let header = |sub| {
        Header::new(sub)
            .kv("digit", args.digit)
            .kv("epochs", args.epochs)
            .kv("alpha", args.alpha)
            .kv("alpha_decay", args.alpha_decay)
            .kv("batch_size", args.batch_size)
            .kv("model_samples", args.model_samples)
            .kv("lambda0", args.lambda0)
            .kv("weight_bound", args.weight_bound)
            .kv("source", &source)
            .kv("side", args.side)
            .kv("threshold", args.threshold)
            .kv("images", class.len())
            .kv("seed", args.seed)
    };

    let model_text = header("train-cd").render() + &write_model(&trained);
    write_text(&args.out, &model_text)?;

    if let Some(diag_path) = &args.diag {
        let mut text = header("train-cd").render();
        text.push_str("epoch,alpha,steps,mean_abs_dw,mean_gap,mean_abs_w\n");
        for d in &diagnostics {
            writeln!(
                text,
                "{},{},{},{},{},{}",
                d.epoch, d.alpha, d.steps, d.mean_abs_dw, d.mean_gap, d.mean_abs_w
            )
            .unwrap();
        }
        write_text(diag_path, &text)?;
    }

    if let Some(act_path) = &args.activations {
        let acts = mean_activation(
            &trained,
            args.lambda0,
            args.activation_samples,
            derive_u64(args.seed, "activation-probe", 0),
        )?;
        let mut text = header("train-cd").render();
        writeln!(text, "# activation_samples {}", args.activation_samples).unwrap();
        for r in 0..args.side {
            let row: Vec<String> = (0..args.side)
                .map(|c| acts[r * args.side + c].to_string())
                .collect();
            writeln!(text, "{}", row.join(",")).unwrap();
        }
        write_text(act_path, &text)?;
    }

    Ok(())
}
