//! Arguments shared by several subcommands.

use std::sync::atomic::{AtomicU8, Ordering};

use clap::{Args, ValueEnum};
use serde::Serialize;

use hyptri::enumeration::{lambda_of_theta, LambdaParams};
use hyptri::oracle::Rooting;

use crate::output::usage;

static VERBOSITY: AtomicU8 = AtomicU8::new(0);

pub fn set_verbosity(v: u8) {
    VERBOSITY.store(v, Ordering::Relaxed);
}

/// Progress on stderr, shown with `-v`.
pub fn info(msg: &str) {
    if VERBOSITY.load(Ordering::Relaxed) > 0 {
        eprintln!("{msg}");
    }
}

/// `λ` directly, as `λ_c`, or through `θ ↦ λ(θ)`; `λ_c` when none is given.
#[derive(Args, Clone, Debug, Serialize)]
#[group(multiple = false)]
pub struct LambdaArgs {
    /// Vertex weight λ ∈ (0, λ_c].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Use the critical value λ_c = 1/(12√3).
    #[arg(long)]
    pub lambda_critical: bool,
    /// Genus-to-size ratio θ ∈ [0, 1/2), mapped to λ(θ).
    #[arg(long)]
    pub theta: Option<f64>,
}

impl LambdaArgs {
    pub fn resolve(&self) -> anyhow::Result<LambdaParams> {
        let lambda = match (self.lambda, self.theta) {
            (Some(l), _) => l,
            (None, Some(t)) => lambda_of_theta(t).map_err(|e| usage(e.to_string()))?,
            (None, None) => return Ok(LambdaParams::critical()),
        };
        LambdaParams::from_lambda(lambda).map_err(|e| usage(e.to_string()))
    }

    /// `Some` only when a value was given explicitly.
    pub fn explicit(&self) -> anyhow::Result<Option<LambdaParams>> {
        if self.lambda.is_none() && self.theta.is_none() && !self.lambda_critical {
            return Ok(None);
        }
        self.resolve().map(Some)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootingArg {
    /// A uniform oriented edge.
    Edge,
    /// A uniform boundary edge, boundary on its right.
    BoundaryEdge,
}

impl From<RootingArg> for Rooting {
    fn from(r: RootingArg) -> Self {
        match r {
            RootingArg::Edge => Rooting::UniformEdge,
            RootingArg::BoundaryEdge => Rooting::UniformBoundaryEdge,
        }
    }
}

pub fn code_string(code: &[u32]) -> String {
    code.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}
