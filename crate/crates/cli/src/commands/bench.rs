//! `pbit bench-scaling` — instance suites, both engines, scaling fits.

use super::{join_list, FormArg, ProblemArg};
use crate::error::CliError;
use crate::header::Header;
use crate::output::emit;
use pbit_core::analysis::ScalingReport;
use pbit_core::opt::{run_scaling_suite, ProblemKind, SuiteConfig};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct BenchScalingArgs {
    #[arg(long, value_enum)]
    pub kind: ProblemArg,

    /// Problem sizes, comma-separated (e.g. 10,20,30).
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,

    /// Instances per size.
    #[arg(long)]
    pub instances: usize,

    /// Trials per instance and engine.
    #[arg(long)]
    pub trials: usize,

    #[arg(long, default_value_t = 150e6)]
    pub lambda0: f64,

    /// Inverse-temperature factor applied to instance couplings.
    #[arg(long, default_value_t = 0.35)]
    pub coupling_scale: f64,

    /// Per-trial simulated-seconds budget; misses score infinity.
    #[arg(long, default_value_t = 1e-4)]
    pub max_time: f64,

    /// Greedy-descent restarts certifying targets for sizes beyond
    /// exhaustive enumeration.
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,

    /// Bootstrap resamples for the fit confidence intervals.
    #[arg(long, default_value_t = 1000)]
    pub resamples: usize,

    #[arg(long, value_enum, default_value_t = FormArg::PureExp)]
    pub form: FormArg,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output CSV report.
    #[arg(long)]
    pub out: PathBuf,
}

fn report_comments(text: &mut String, label: &str, report: &ScalingReport) {
    writeln!(text, "# {label}_form {}", report.fit.form.label()).unwrap();
    writeln!(text, "# {label}_log_a {}", report.fit.log_a).unwrap();
    writeln!(text, "# {label}_a {}", report.fit.a()).unwrap();
    writeln!(text, "# {label}_b {}", report.fit.b).unwrap();
    writeln!(text, "# {label}_a_ci {},{}", report.a_ci.0, report.a_ci.1).unwrap();
    writeln!(text, "# {label}_b_ci {},{}", report.b_ci.0, report.b_ci.1).unwrap();
    writeln!(text, "# {label}_resamples {}", report.resamples).unwrap();
    writeln!(
        text,
        "# {label}_dropped_resamples {}",
        report.dropped_resamples
    )
    .unwrap();
}

pub fn run(args: &BenchScalingArgs) -> Result<(), CliError> {
    let cfg = SuiteConfig {
        kind: match args.kind {
            ProblemArg::Maxcut => ProblemKind::MaxCut,
            ProblemArg::Sk => ProblemKind::Sk,
        },
        sizes: args.sizes.clone(),
        instances: args.instances,
        trials: args.trials,
        lambda0: args.lambda0,
        coupling_scale: args.coupling_scale,
        max_sim_time: args.max_time,
        descent_restarts: args.restarts,
        resamples: args.resamples,
        form: args.form.to_core(),
        seed: args.seed,
    };
    let outcome = run_scaling_suite(&cfg)?;

    let mut text = Header::new("bench-scaling")
        .kv("kind", cfg.kind.label())
        .kv("sizes", join_list(&args.sizes))
        .kv("instances", args.instances)
        .kv("trials", args.trials)
        .kv("lambda0", args.lambda0)
        .kv("coupling_scale", args.coupling_scale)
        .kv("max_time", args.max_time)
        .kv("restarts", args.restarts)
        .kv("resamples", args.resamples)
        .kv("form", cfg.form.label())
        .kv("seed", args.seed)
        .render();

    report_comments(&mut text, "async", &outcome.async_report);
    report_comments(&mut text, "sync", &outcome.sync_report);
    for (size, instance, energy) in &outcome.targets {
        writeln!(text, "# target {size},{instance},{energy}").unwrap();
    }
    for note in &outcome.excluded {
        writeln!(text, "# excluded {note}").unwrap();
    }
    text.push_str("size,instance,trial,engine,tts,best_energy\n");
    for row in &outcome.rows {
        writeln!(
            text,
            "{},{},{},{},{},{}",
            row.size,
            row.instance,
            row.trial,
            row.engine.label(),
            row.tts,
            row.best_energy
        )
        .unwrap();
    }
    emit(Some(&args.out), &text)
}
