//! Option validation, tolerance handling and report emission.

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::path::{Path, PathBuf};
use weldlab_core::bowen_series::MAX_RANK;
use weldlab_core::correspondence_model::MAX_WORD_LENGTH;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOL_RANGE: (f64, f64) = (1e-14, 1e-3);
pub const MAX_DEPTH: usize = 48;
pub const MAX_STEPS: usize = 1_000_000;
pub const MAX_SAMPLES: usize = 100_000;

/// A bad command line or input file. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

/// Resolve the tolerance from `--tol` or `WELDLAB_TOL` and export it so the library
/// reads the same value.
pub fn resolve_tolerance(flag: Option<f64>) -> Result<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("WELDLAB_TOL") {
            Ok(s) => match s.trim().parse::<f64>() {
                Ok(t) => t,
                Err(_) => return usage(format!("WELDLAB_TOL is not a number: '{s}'")),
            },
            Err(_) => weldlab_core::hyperbolic::DEFAULT_TOL,
        },
    };
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
        return usage(format!(
            "tolerance {tol:e} outside [{:e}, {:e}]",
            TOL_RANGE.0, TOL_RANGE.1
        ));
    }
    std::env::set_var("WELDLAB_TOL", tol.to_string());
    Ok(tol)
}

pub fn check_rank(rank: usize) -> Result<usize> {
    if rank > MAX_RANK {
        return usage(format!("rank {rank} exceeds the limit {MAX_RANK}"));
    }
    Ok(rank)
}

pub fn check_length(len: usize) -> Result<usize> {
    if len > MAX_WORD_LENGTH {
        return usage(format!(
            "word length {len} exceeds the limit {MAX_WORD_LENGTH}"
        ));
    }
    Ok(len)
}

pub fn check_range(name: &str, value: usize, min: usize, max: usize) -> Result<usize> {
    if !(min..=max).contains(&value) {
        return usage(format!("--{name} {value} outside [{min}, {max}]"));
    }
    Ok(value)
}

pub fn read_input(path: &Path) -> Result<String> {
    if !path.exists() {
        return usage(format!("file not found: {}", path.display()));
    }
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Where a report goes: stdout or a file.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub path: Option<PathBuf>,
}

impl Output {
    /// Wrap `report` in the versioned envelope and write it.
    pub fn emit(&self, command: &str, report: &impl Serialize) -> Result<()> {
        let doc = envelope(command, serde_json::to_value(report)?);
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        match &self.path {
            Some(p) => {
                std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))
            }
            None => {
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

pub fn envelope(command: &str, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "result": result,
    })
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guards() {
        assert!(check_rank(MAX_RANK).is_ok());
        assert!(check_rank(99).unwrap_err().downcast_ref::<UsageError>().is_some());
        assert!(check_length(MAX_WORD_LENGTH + 1).is_err());
        assert!(check_range("depth", 0, 1, MAX_DEPTH).is_err());
    }

    #[test]
    fn tolerance_range() {
        assert_eq!(resolve_tolerance(Some(1e-10)).unwrap(), 1e-10);
        assert!(resolve_tolerance(Some(1e-2)).is_err());
        assert!(resolve_tolerance(Some(1e-15)).is_err());
    }

    #[test]
    fn envelope_leads_with_version() {
        let v = envelope("x", json!([]));
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["schema_version", "command", "result"]);
        assert_eq!(v["result"], json!([]));
    }
}
