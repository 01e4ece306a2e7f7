//! `pbit reconstruct` — infer the unclamped half of an image.

use super::load_model;
use crate::error::CliError;
use crate::header::Header;
use crate::output::emit;
use pbit_core::ml::reconstruct;
use pbit_core::topology::Mask;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct ReconstructArgs {
    /// Trained model file.
    #[arg(long)]
    pub model: PathBuf,

    /// Image file in mask text format ('#' = on, '.' = off); its top rows
    /// are clamped into the model.
    #[arg(long)]
    pub clamp_top_half: PathBuf,

    /// Rows to clamp from the top (default: half the image).
    #[arg(long)]
    pub clamp_rows: Option<usize>,

    /// Expected per-neuron update opportunities in the sampling window.
    #[arg(long, default_value_t = 4000)]
    pub samples: u64,

    #[arg(long, default_value_t = 150e6)]
    pub lambda0: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &ReconstructArgs) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let text = std::fs::read_to_string(&args.clamp_top_half)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.clamp_top_half.display())))?;
    let image = Mask::parse(&text)?;
    let (rows, cols) = (image.rows(), image.cols());
    if rows * cols != model.n() {
        return Err(CliError::config(format!(
            "image is {rows}x{cols} = {} pixels but the model has {} spins",
            rows * cols,
            model.n()
        )));
    }
    let clamp_rows = args.clamp_rows.unwrap_or(rows / 2);
    if clamp_rows > rows {
        return Err(CliError::config(format!(
            "--clamp-rows {clamp_rows} exceeds the image height {rows}"
        )));
    }

    let mut clamp_mask = vec![false; model.n()];
    let mut clamp_values = vec![0u8; model.n()];
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            clamp_mask[i] = r < clamp_rows;
            clamp_values[i] = u8::from(image.bit(r, c));
        }
    }
    let report = reconstruct(
        &model,
        &clamp_mask,
        &clamp_values,
        args.lambda0,
        args.samples,
        args.seed,
    )?;

    let mut out = Header::new("reconstruct")
        .kv("model", args.model.display())
        .kv("image", args.clamp_top_half.display())
        .kv("rows", rows)
        .kv("cols", cols)
        .kv("clamp_rows", clamp_rows)
        .kv("samples", args.samples)
        .kv("lambda0", args.lambda0)
        .kv("seed", args.seed)
        .render();
    out.push_str("row,col,clamped,input,marginal,modal\n");
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            writeln!(
                out,
                "{r},{c},{},{},{},{}",
                u8::from(clamp_mask[i]),
                clamp_values[i],
                report.marginals[i],
                u8::from(report.modal[i] != 0)
            )
            .unwrap();
        }
    }
    emit(args.out.as_deref(), &out)
}
