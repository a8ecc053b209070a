//! `enumerate`: exact counts from the recursion and the closed formula.

use std::path::{Path, PathBuf};

use clap::Args;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use hyptri::enumeration::{tau_planar_polygon, CountTable, GjRecursion, Provenance};
use hyptri::oracle::{enumerate_rooted, GluingSpec};

use crate::common::{info, join};
use crate::output::{usage, Artifact, CliError};

#[derive(Args, Clone, Debug, Serialize)]
pub struct EnumerateArgs {
    /// Closed surfaces: τ(n, g) from the recursion (needs --n and --g).
    #[arg(long, conflicts_with_all = ["p", "table"])]
    pub gj: bool,
    /// Planar p-gon: τ_p(n, 0) from the closed formula (needs --n).
    #[arg(long, conflicts_with = "table")]
    pub p: Option<u64>,
    /// Size index n.
    #[arg(long)]
    pub n: Option<i64>,
    /// Genus.
    #[arg(long)]
    pub g: Option<usize>,
    /// A whole table: τ(n, g) for n ≤ max-n, g ≤ max-g and τ_p(n, 0) for p ≤ max-p.
    #[arg(long)]
    pub table: bool,
    #[arg(long, default_value_t = 20)]
    pub max_n: i64,
    #[arg(long, default_value_t = 2)]
    pub max_g: usize,
    #[arg(long, default_value_t = 6)]
    pub max_p: u64,
}

/// The recursion with its base `τ(1, 0)` counted by the gluing oracle.
pub fn pinned_recursion() -> anyhow::Result<GjRecursion> {
    let base = enumerate_rooted(&GluingSpec::closed(2, Some(0)))?;
    Ok(GjRecursion::seeded(&BigInt::from(base.len()))?)
}

fn cache_file(dir: &Path) -> PathBuf {
    dir.join("counts.json")
}

/// Every computed entry is checked against the cache, then added to it.
fn merge_into_cache(dir: &Path, fresh: &CountTable) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = cache_file(dir);
    let mut cached = if path.exists() { CountTable::load(&path)? } else { CountTable::new() };
    for e in fresh.entries() {
        let count: BigInt = e.count.parse()?;
        cached.insert(e.n, e.g, e.p.clone(), count, e.provenance).map_err(|err| {
            CliError::Invariant(format!("cache {} disagrees: {err}", path.display()))
        })?;
    }
    cached.save(&path)?;
    info(&format!("cache {}: {} entries", path.display(), cached.len()));
    Ok(())
}

pub fn run(a: &EnumerateArgs, cache: Option<&Path>) -> anyhow::Result<Artifact> {
    let mut table = CountTable::new();
    if a.gj {
        let (Some(n), Some(g)) = (a.n, a.g) else { return Err(usage("--gj needs --n and --g")) };
        let mut gj = pinned_recursion()?;
        table.insert(n, g, vec![], gj.tau(n, g).map_err(|e| usage(e.to_string()))?, Provenance::Recursion)?;
    } else if let Some(p) = a.p {
        let Some(n) = a.n else { return Err(usage("--p needs --n")) };
        if a.g.is_some_and(|g| g != 0) {
            return Err(usage("the polygon formula is planar: --g must be 0"));
        }
        table.insert(n, 0, vec![p], tau_planar_polygon(n, p).map_err(|e| usage(e.to_string()))?, Provenance::Formula)?;
    } else if a.table {
        let mut gj = pinned_recursion()?;
        table.fill(&mut gj, a.max_n, a.max_g, a.max_p).map_err(|e| usage(e.to_string()))?;
    } else {
        return Err(usage("choose one of --gj, --p or --table"));
    }
    if let Some(dir) = cache {
        merge_into_cache(dir, &table)?;
    }
    let entries = table.entries();
    let rows = entries
        .iter()
        .map(|e| vec![e.n.to_string(), e.g.to_string(), join(&e.p, ";"), e.count.clone(), e.provenance.to_string()])
        .collect();
    Ok(Artifact::new(json!({ "entries": entries }), &["n", "g", "p", "count", "provenance"], rows))
}
