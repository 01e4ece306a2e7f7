//! `pbit oracle` — exhaustive Boltzmann distribution of a small model.

use super::load_model;
use crate::error::CliError;
use crate::header::Header;
use crate::output::emit;
use pbit_core::analysis::{exact_distribution, ground_states, min_energy};
use pbit_core::model::SpinState;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct OracleArgs {
    /// Model file to enumerate (at most 20 spins).
    #[arg(long)]
    pub model: PathBuf,

    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &OracleArgs) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let exact = exact_distribution(&model)?;
    let e_min = min_energy(&model)?;
    let grounds = ground_states(&model)?;

    let mut text = Header::new("oracle")
        .kv("model", args.model.display())
        .kv("n", model.n())
        .render();
    writeln!(text, "# log_z {}", exact.log_z()).unwrap();
    writeln!(text, "# min_energy {e_min}").unwrap();
    writeln!(text, "# ground_states {}", super::join_list(&grounds)).unwrap();
    text.push_str("index,probability,energy\n");
    for (idx, &p) in exact.probs().iter().enumerate() {
        let state = SpinState::from_index(model.domain(), model.n(), idx);
        writeln!(text, "{idx},{p},{}", model.energy(&state)?).unwrap();
    }
    emit(args.out.as_deref(), &text)
}
