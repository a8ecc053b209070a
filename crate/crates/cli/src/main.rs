//! `hyptri`: exact counts, samplers, peeling explorations, the brute-force
//! oracle and the experiment suite from the command line.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 usage error, 3 cap exceeded.

mod common;
mod enumerate;
mod experiment;
mod oracle;
mod output;
mod peel;
mod sample;
mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use hyptri::enumeration::EnumError;
use hyptri::experiments::ExperimentError;
use hyptri::oracle::OracleError;
use hyptri::peeling::PeelError;
use hyptri::samplers::SamplerError;

use output::{emit, CliError, Format, RunConfig};

/// Environment variable naming the cache directory.
const CACHE_ENV: &str = "HYPTRI_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "hyptri", version, about = "Triangulations with boundaries: counts, samplers and peeling")]
struct Cli {
    /// Worker threads; outputs do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output format (default: csv for enumerate, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Cache directory, overriding $HYPTRI_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Progress on stderr; repeat for more.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Exact counts τ(n, g) and τ_p(n, 0).
    Enumerate(enumerate::EnumerateArgs),
    /// Samples from the infinite models, Boltzmann maps or uniform small maps.
    Sample(sample::SampleArgs),
    /// Peeling exploration of a finite triangulation.
    Peel(peel::PeelArgs),
    /// Brute-force enumeration of a small class.
    Oracle(oracle::OracleArgs),
    /// Run one experiment and emit its report.
    Experiment(experiment::ExperimentArgs),
    /// Run the invariant suite; non-zero exit on any failure.
    Verify(verify::VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate(_) => "enumerate",
            Command::Sample(_) => "sample",
            Command::Peel(_) => "peel",
            Command::Oracle(_) => "oracle",
            Command::Experiment(_) => "experiment",
            Command::Verify(_) => "verify",
        }
    }

    fn parameters(&self) -> anyhow::Result<BTreeMap<String, Value>> {
        let v = match self {
            Command::Enumerate(a) => serde_json::to_value(a)?,
            Command::Sample(a) => serde_json::to_value(a)?,
            Command::Peel(a) => serde_json::to_value(a)?,
            Command::Oracle(a) => serde_json::to_value(a)?,
            Command::Experiment(a) => serde_json::to_value(a)?,
            Command::Verify(a) => serde_json::to_value(a)?,
        };
        Ok(match v {
            Value::Object(m) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        })
    }
}

/// The arguments without `--jobs`, which never changes an output.
fn replay_argv(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--jobs" {
            it.next();
        } else if !a.starts_with("--jobs=") {
            out.push(a.clone());
        }
    }
    out
}

fn run(cli: Cli, argv: &[String]) -> anyhow::Result<()> {
    common::set_verbosity(cli.verbose);
    let cache = cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let format = cli.format.unwrap_or(match cli.command {
        Command::Enumerate(_) => Format::Csv,
        _ => Format::Json,
    });
    let parameters = cli.command.parameters()?;
    let run = RunConfig {
        tool: "hyptri",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: cli.command.name().to_string(),
        seed: parameters.get("seed").and_then(Value::as_u64),
        parameters,
        cache_dir: cache.as_ref().map(|p| p.display().to_string()),
        format,
        verbosity: cli.verbose,
        argv: replay_argv(argv),
    };
    let art = match &cli.command {
        Command::Enumerate(a) => enumerate::run(a, cache.as_deref())?,
        Command::Sample(a) => sample::run(a)?,
        Command::Peel(a) => peel::run(a)?,
        Command::Oracle(a) => oracle::run(a)?,
        Command::Experiment(a) => experiment::run(a)?,
        Command::Verify(a) => verify::run(a)?,
    };
    emit(&run, &art)?;
    match art.failure {
        Some(f) => Err(CliError::Invariant(f).into()),
        None => Ok(()),
    }
}

/// Exit code of an error: the first recognised cause decides.
fn exit_code(e: &anyhow::Error) -> u8 {
    const USAGE: u8 = 2;
    const CAP: u8 = 3;
    const INVARIANT: u8 = 1;
    fn oracle(e: &OracleError) -> u8 {
        match e {
            OracleError::CapExceeded { .. } => CAP,
            OracleError::Domain(_) => USAGE,
        }
    }
    fn sampler(e: &SamplerError) -> u8 {
        match e {
            SamplerError::Budget { .. } => CAP,
            SamplerError::Domain(_) => USAGE,
            SamplerError::Normalization { .. } => INVARIANT,
        }
    }
    fn enumeration(e: &EnumError) -> u8 {
        match e {
            EnumError::Domain(_) => USAGE,
            _ => INVARIANT,
        }
    }
    fn peel(e: &PeelError) -> u8 {
        match e {
            PeelError::Domain(_) | PeelError::NoBoundary | PeelError::Precondition(_) => USAGE,
            _ => INVARIANT,
        }
    }
    for cause in e.chain() {
        if let Some(c) = cause.downcast_ref::<CliError>() {
            return match c {
                CliError::Usage(_) => USAGE,
                CliError::Invariant(_) => INVARIANT,
            };
        }
        if let Some(c) = cause.downcast_ref::<OracleError>() {
            return oracle(c);
        }
        if let Some(c) = cause.downcast_ref::<SamplerError>() {
            return sampler(c);
        }
        if let Some(c) = cause.downcast_ref::<EnumError>() {
            return enumeration(c);
        }
        if let Some(c) = cause.downcast_ref::<PeelError>() {
            return peel(c);
        }
        if let Some(c) = cause.downcast_ref::<ExperimentError>() {
            return match c {
                ExperimentError::Sampler(s) => sampler(s),
                ExperimentError::Oracle(o) => oracle(o),
                ExperimentError::Enum(x) => enumeration(x),
                ExperimentError::Peel(p) => peel(p),
                ExperimentError::Domain(_) => USAGE,
            };
        }
    }
    INVARIANT
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let pool = match cli.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli, &argv[1..])) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
