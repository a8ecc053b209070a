//! Desk-scale experiments: Monte Carlo checks of the peeling laws, exact
//! ratio and sandwich checks on count tables, exact boundary-event laws and
//! total-variation trends between finite and infinite ball laws.
//!
//! Every experiment returns an [`ExperimentReport`] that is a pure function
//! of its parameters and seed: samples use one random stream per index and
//! are reduced sequentially in index order, whatever the thread count.

pub mod exact;
pub mod mc;
pub mod tv;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::enumeration::EnumError;
use crate::oracle::OracleError;
use crate::peeling::PeelError;
use crate::samplers::{stream, SamplerError, SamplerRng};

pub use exact::{
    boundary_event_table, exp_bound_check, planar_ratio_check, ratio_checks, sandwich_check,
    vertex_ratio_check, RatioRange,
};
pub use mc::{boltzmann_chi_square, mc_inverse_root_degree, mc_markov_check, MarkovPattern};
pub use tv::{mc_ball_law, tv_distance_balls, tv_trend, BallLaw, TV_BATCHES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Peel(#[from] PeelError),
    #[error("invalid experiment input: {0}")]
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Not enough data to decide, e.g. a single sample.
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Pass only if every part passes; inconclusive parts make the whole inconclusive.
    pub fn all(parts: impl IntoIterator<Item = Status>) -> Self {
        let mut out = Status::Pass;
        for s in parts {
            match s {
                Status::Fail => return Status::Fail,
                Status::Inconclusive => out = Status::Inconclusive,
                Status::Pass => {}
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub estimate: Option<f64>,
    pub exact_or_target: Option<f64>,
    /// `None` when undefined (fewer than two samples): an infinite error bar.
    pub stderr: Option<f64>,
    pub n_samples: u64,
    pub seed: Option<u64>,
    pub verdict: Status,
    /// How the verdict was reached, e.g. `|estimate − target| ≤ 3σ`.
    pub criterion: String,
    /// Upper bound on the positive bias of a plug-in estimator, when relevant.
    pub bias_bound: Option<f64>,
    /// Tabulated detail, one row per grid point or outcome.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(name: &str) -> Self {
        ExperimentReport {
            name: name.to_string(),
            parameters: BTreeMap::new(),
            estimate: None,
            exact_or_target: None,
            stderr: None,
            n_samples: 0,
            seed: None,
            verdict: Status::Inconclusive,
            criterion: String::new(),
            bias_bound: None,
            columns: Vec::new(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(s).map_err(|e| ExperimentError::Domain(e.to_string()))
    }

    /// The table as CSV; a report without a table gives its summary line.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.columns.is_empty() {
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            w.write_record(["name", "estimate", "target", "stderr", "n_samples", "seed", "verdict"])
                .expect("in-memory write");
            w.write_record([
                self.name.clone(),
                opt(self.estimate),
                opt(self.exact_or_target),
                opt(self.stderr),
                self.n_samples.to_string(),
                self.seed.map(|s| s.to_string()).unwrap_or_default(),
                status_name(self.verdict).to_string(),
            ])
            .expect("in-memory write");
        } else {
            w.write_record(&self.columns).expect("in-memory write");
            for row in &self.rows {
                w.write_record(row.iter().map(cell)).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Inconclusive => "inconclusive",
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `f` on the streams `0..n` of `seed`, in index order.
pub(crate) fn par_samples<T, F>(seed: u64, n: u64, f: F) -> Result<Vec<T>, ExperimentError>
where
    T: Send,
    F: Fn(SamplerRng) -> Result<T, ExperimentError> + Sync,
{
    (0..n).into_par_iter().map(|i| f(stream(seed, i))).collect()
}

/// Mean and standard error of the mean, summed in order.
pub(crate) fn mean_stderr(xs: &[f64]) -> (f64, Option<f64>) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, None);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, Some((var / n).sqrt()))
}

/// `|estimate − target| ≤ 3σ`, inconclusive without an error bar.
pub(crate) fn three_sigma(estimate: f64, target: f64, stderr: Option<f64>) -> Status {
    match stderr {
        Some(s) if s.is_finite() => Status::from_bool((estimate - target).abs() <= 3.0 * s),
        _ => Status::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_combination() {
        assert_eq!(Status::all([Status::Pass, Status::Pass]), Status::Pass);
        assert_eq!(Status::all([Status::Pass, Status::Inconclusive]), Status::Inconclusive);
        assert_eq!(Status::all([Status::Inconclusive, Status::Fail]), Status::Fail);
    }

    #[test]
    fn report_round_trips_and_tabulates() {
        let mut r = ExperimentReport::new("demo").param("n", 3);
        r.columns = vec!["k".into(), "p".into()];
        r.rows = vec![vec![Value::from(1), Value::from(0.5)], vec![Value::from(2), Value::from("1/3")]];
        assert_eq!(ExperimentReport::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.to_csv(), "k,p\n1,0.5\n2,1/3\n");
        let s = ExperimentReport::new("bare").to_csv();
        assert_eq!(s.lines().nth(1).unwrap(), "bare,,,,0,,inconclusive");
    }

    #[test]
    fn error_bars() {
        assert_eq!(mean_stderr(&[1.0]), (1.0, None));
        let (m, s) = mean_stderr(&[0.0, 2.0]);
        assert_eq!(m, 1.0);
        assert!((s.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(three_sigma(1.0, 0.0, None), Status::Inconclusive);
        assert_eq!(three_sigma(1.0, 0.0, Some(0.5)), Status::Pass);
        assert_eq!(three_sigma(2.0, 0.0, Some(0.5)), Status::Fail);
    }
}
