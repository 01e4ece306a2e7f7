//! Output destination handling.
//!
//! Relative `--out` paths are joined onto `PBIT_OUT_DIR` when that
//! environment variable is set; absolute paths are used as given. Parent
//! directories are created on demand. Commands whose `--out` is optional
//! write to stdout when it is omitted.

use crate::error::CliError;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Resolves a user-supplied output path against `PBIT_OUT_DIR`.
pub fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("PBIT_OUT_DIR") {
        Some(dir) => Path::new(&dir).join(path),
        None => path.to_path_buf(),
    }
}

/// Writes `text` to the resolved path, creating parent directories, and
/// reports the resolved location on stderr so file outputs never pollute
/// stdout streams.
pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    let resolved = resolve_out(path);
    if let Some(parent) = resolved.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(&resolved, text)?;
    eprintln!("wrote {}", resolved.display());
    Ok(())
}

/// Writes to `--out` when given, otherwise to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
