//! `experiment`: the report-producing experiments.

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use hyptri::experiments::{
    boltzmann_chi_square, boundary_event_table, mc_inverse_root_degree, mc_markov_check, ratio_checks,
    sandwich_check, tv_distance_balls, tv_trend, ExperimentReport, MarkovPattern, RatioRange, Status,
};
use hyptri::oracle::DEFAULT_CAP;
use hyptri::samplers::HalfPlaneVariant;

use crate::common::{LambdaArgs, RootingArg};
use crate::output::{usage, Artifact};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HalfPlaneArg {
    Hyperbolic,
    Subcritical,
}

impl From<HalfPlaneArg> for HalfPlaneVariant {
    fn from(v: HalfPlaneArg) -> Self {
        match v {
            HalfPlaneArg::Hyperbolic => HalfPlaneVariant::Hyperbolic,
            HalfPlaneArg::Subcritical => HalfPlaneVariant::Subcritical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternArg {
    /// A new third vertex at the root: βλ.
    CaseI,
    /// Two new vertices in a row: (βλ)².
    CaseITwice,
    /// One edge swallowed to the left, enclosing an empty 2-gon: 1/β.
    LeftEmptyFill,
}

impl From<PatternArg> for MarkovPattern {
    fn from(p: PatternArg) -> Self {
        match p {
            PatternArg::CaseI => MarkovPattern::CaseI,
            PatternArg::CaseITwice => MarkovPattern::CaseITwice,
            PatternArg::LeftEmptyFill => MarkovPattern::LeftEmptyFill,
        }
    }
}

#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentCmd {
    /// E[1/deg(root)] in the plane model against d(λ).
    InverseDegree {
        #[command(flatten)]
        #[serde(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Frequency of a finite pattern at the root of a half-plane model.
    Markov {
        #[command(flatten)]
        #[serde(flatten)]
        lambda: LambdaArgs,
        #[arg(long, value_enum, default_value = "hyperbolic")]
        variant: HalfPlaneArg,
        #[arg(long, value_enum, default_value = "case-i")]
        pattern: PatternArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// χ² test of the Boltzmann sampler on its small atoms.
    ChiSquare {
        #[command(flatten)]
        #[serde(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        max_internal: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        significance: f64,
    },
    /// TV distance between the exact ball law of 𝒯_𝐩(n, g) and the sampled limit.
    Tv {
        /// λ of the limit; λ(g/n) when absent.
        #[command(flatten)]
        #[serde(flatten)]
        lambda: LambdaArgs,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        g: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        perimeters: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, value_enum, default_value = "boundary-edge")]
        rooting: RootingArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// TV distances of planar p-gons with fixed internal vertices, as p grows.
    TvTrend {
        #[arg(long, default_value_t = 2)]
        internal: usize,
        #[arg(long, default_value_t = 1)]
        p_min: usize,
        #[arg(long, default_value_t = 8)]
        p_max: usize,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact ratio, sandwich and growth checks on the count tables.
    Ratios {
        #[arg(long, default_value_t = 200)]
        planar_n: i64,
        #[arg(long, default_value_t = 40)]
        table_n: i64,
        #[arg(long, default_value_t = 8)]
        table_g: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        oracle_cap: usize,
    },
    /// The two-sided sandwich bounds on τ(n, g).
    Sandwich {
        #[arg(long, default_value_t = 60)]
        max_n: i64,
        #[arg(long, default_value_t = 15)]
        max_g: usize,
    },
    /// Exact law of the event at step k of the root-boundary exploration.
    BoundaryEvents {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        g: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        perimeters: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ExperimentArgs {
    #[command(subcommand)]
    #[serde(flatten)]
    pub cmd: ExperimentCmd,
}

fn report(cmd: &ExperimentCmd) -> anyhow::Result<ExperimentReport> {
    Ok(match cmd {
        ExperimentCmd::InverseDegree { lambda, samples, seed } => mc_inverse_root_degree(lambda.resolve()?, *samples, *seed)?,
        ExperimentCmd::Markov { lambda, variant, pattern, samples, seed } => {
            mc_markov_check(lambda.resolve()?, (*variant).into(), (*pattern).into(), *samples, *seed)?
        }
        ExperimentCmd::ChiSquare { lambda, p, max_internal, samples, seed, significance } => {
            boltzmann_chi_square(*p, lambda.resolve()?, *max_internal, *samples, *seed, *significance)?
        }
        ExperimentCmd::Tv { lambda, n, g, perimeters, radius, rooting, samples, seed } => {
            tv_distance_balls(*n, *g, perimeters, *radius, lambda.explicit()?, (*rooting).into(), *samples, *seed)?
        }
        ExperimentCmd::TvTrend { internal, p_min, p_max, radius, samples, seed } => {
            if p_min > p_max {
                return Err(usage("--p-min exceeds --p-max"));
            }
            tv_trend(*internal, *p_min..=*p_max, *radius, *samples, *seed)?
        }
        ExperimentCmd::Ratios { planar_n, table_n, table_g, oracle_cap } => ratio_checks(RatioRange {
            planar_n: *planar_n,
            table_n: *table_n,
            table_g: *table_g,
            oracle_cap: *oracle_cap,
        })?,
        ExperimentCmd::Sandwich { max_n, max_g } => sandwich_check(*max_n, *max_g)?,
        ExperimentCmd::BoundaryEvents { n, g, perimeters, k } => boundary_event_table(*n, *g, perimeters, *k)?,
    })
}

/// The report as the result; its table (or summary line) as the CSV form.
pub fn run(a: &ExperimentArgs) -> anyhow::Result<Artifact> {
    let r = report(&a.cmd)?;
    let csv_text = r.to_csv();
    let mut rd = csv::Reader::from_reader(csv_text.as_bytes());
    let columns: Vec<String> = rd.headers()?.iter().map(String::from).collect();
    let rows = rd.records().map(|rec| Ok(rec?.iter().map(String::from).collect())).collect::<anyhow::Result<_>>()?;
    let failure = (r.verdict == Status::Fail).then(|| format!("{} failed: {}", r.name, r.criterion));
    Ok(Artifact { result: serde_json::to_value(&r)?, columns, rows, failure })
}
