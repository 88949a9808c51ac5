//! Uniform run reports: one CSV table plus one JSON summary per run.
//!
//! The summary schema is fixed: experiment, params, results,
//! invariant_failures, wall_time_ms. Everything except wall_time_ms is a
//! pure function of the configuration (seed included), which is what the
//! determinism contract tests compare.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sievelab_core::{Error, Result};

/// Which report files a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Both,
}

/// Everything an experiment hands back to the runner.
pub struct RunOutput {
    pub experiment: &'static str,
    /// Effective experiment parameters, flags and config merged.
    pub params: Value,
    pub csv_header: &'static str,
    pub csv_rows: Vec<String>,
    /// Machine-readable findings for the JSON summary.
    pub results: Value,
    /// Cross-checks that failed during the run; nonzero forces exit 2.
    pub invariant_failures: u64,
    /// Human-oriented lines echoed to stdout once the files are written.
    pub notes: Vec<String>,
}

pub fn summary_json(out: &RunOutput, wall_ms: u128) -> Value {
    json!({
        "experiment": out.experiment,
        "params": out.params,
        "results": out.results,
        "invariant_failures": out.invariant_failures,
        "wall_time_ms": wall_ms as u64,
    })
}

/// Writes `{out_dir}/{experiment}.csv` and/or `.json`, creating the
/// directory if needed, and returns the paths written.
pub fn write_outputs(
    out: &RunOutput,
    out_dir: &Path,
    format: Format,
    wall_ms: u128,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| {
        Error::Resource(format!("cannot create output dir {}: {e}", out_dir.display()))
    })?;
    let mut written = Vec::new();
    if matches!(format, Format::Csv | Format::Both) {
        let path = out_dir.join(format!("{}.csv", out.experiment));
        let mut text = String::with_capacity(out.csv_rows.len() * 32 + 64);
        text.push_str(out.csv_header);
        text.push('\n');
        for row in &out.csv_rows {
            text.push_str(row);
            text.push('\n');
        }
        fs::write(&path, text)
            .map_err(|e| Error::Resource(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    if matches!(format, Format::Json | Format::Both) {
        let path = out_dir.join(format!("{}.json", out.experiment));
        let mut text = serde_json::to_string_pretty(&summary_json(out, wall_ms))
            .expect("summary serialization cannot fail");
        text.push('\n');
        fs::write(&path, text)
            .map_err(|e| Error::Resource(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}
