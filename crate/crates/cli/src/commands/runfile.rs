//! `pbit run --config file.toml` — drive any subcommand from a config file.
//!
//! The file names a subcommand and a flat `[args]` table whose keys map to
//! that subcommand's long flags (underscores become dashes). Booleans toggle
//! bare flags, arrays become comma-joined values, everything else is passed
//! through as text.

use crate::error::CliError;
use clap::Parser;
use serde::Deserialize;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct RunArgs {
    /// TOML file with `subcommand = "..."` and an `[args]` table.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    subcommand: String,
    #[serde(default)]
    args: toml::Table,
}

fn value_to_string(key: &str, value: &toml::Value) -> Result<String, CliError> {
    match value {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        _ => Err(CliError::config(format!(
            "config key \"{key}\": expected a string, number, boolean, or flat array"
        ))),
    }
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.config.display())))?;
    let file: FileConfig = toml::from_str(&text)?;
    if file.subcommand == "run" {
        return Err(CliError::config(
            "config files cannot nest another `run` subcommand",
        ));
    }

    let mut argv: Vec<String> = vec!["pbit".into(), file.subcommand.clone()];
    let mut keys: Vec<&String> = file.args.keys().collect();
    keys.sort();
    for key in keys {
        let flag = format!("--{}", key.replace('_', "-"));
        match &file.args[key] {
            toml::Value::Boolean(true) => argv.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let parts = items
                    .iter()
                    .map(|v| value_to_string(key, v))
                    .collect::<Result<Vec<_>, _>>()?;
                argv.push(flag);
                argv.push(parts.join(","));
            }
            other => {
                argv.push(flag);
                argv.push(value_to_string(key, other)?);
            }
        }
    }

    let cli = crate::Cli::try_parse_from(&argv).map_err(|e| {
        CliError::config(format!(
            "config file {} maps to invalid arguments: {e}",
            args.config.display()
        ))
    })?;
    crate::dispatch(cli.command)
}
