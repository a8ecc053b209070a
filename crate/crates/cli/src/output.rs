//! Self-describing artifacts: every output carries the run configuration
//! that produced it.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    CliError::Usage(msg.into()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

/// Everything needed to regenerate an artifact. `--jobs` is left out: it
/// does not change any output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub cache_dir: Option<String>,
    pub format: Format,
    pub verbosity: u8,
    /// The arguments as given, for re-running.
    pub argv: Vec<String>,
}

/// A command result: a JSON value and the same data as a table.
pub struct Artifact {
    pub result: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Outcome of the run's own checks; a failure exits with code 1 after
    /// the artifact is written.
    pub failure: Option<String>,
}

impl Artifact {
    pub fn new(result: Value, columns: &[&str], rows: Vec<Vec<String>>) -> Self {
        Artifact { result, columns: columns.iter().map(|c| c.to_string()).collect(), rows, failure: None }
    }
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set. The timestamp
/// is the one field outside the determinism contract.
fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return t;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn render(run: &RunConfig, art: &Artifact) -> anyhow::Result<String> {
    let ts = timestamp();
    match run.format {
        Format::Json => {
            let doc = json!({ "run": run, "timestamp": ts, "result": art.result });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut out = format!("# run: {}\n# timestamp: {ts}\n", serde_json::to_string(run)?);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&art.columns)?;
            for r in &art.rows {
                w.write_record(r)?;
            }
            out.push_str(&String::from_utf8(w.into_inner()?)?);
            Ok(out)
        }
    }
}

pub fn emit(run: &RunConfig, art: &Artifact) -> anyhow::Result<()> {
    let s = render(run, art)?;
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes())?;
    out.flush()?;
    Ok(())
}
