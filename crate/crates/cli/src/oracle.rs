//! `oracle`: brute-force enumeration of small classes, checked against the
//! exact counts where a formula applies.

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use hyptri::enumeration::tau_planar_polygon;
use hyptri::oracle::{enumerate_planar_polygon, enumerate_rooted, Enumeration, GluingSpec, DEFAULT_CAP};

use crate::enumerate::pinned_recursion;
use crate::output::{usage, Artifact};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleEmit {
    /// Counts and the comparison with the exact formula.
    Summary,
    /// Every map, in canonical order.
    Maps,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct OracleArgs {
    /// Size index n of 𝒯_𝐩(n, g).
    #[arg(long, conflicts_with = "planar")]
    pub n: Option<i64>,
    #[arg(long, conflicts_with = "planar")]
    pub g: Option<usize>,
    /// Boundary perimeters, comma separated; none for closed surfaces.
    #[arg(long, value_delimiter = ',', conflicts_with = "planar")]
    pub perimeters: Vec<usize>,
    /// Triangle cap of the gluing oracle.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Planar triangulations of the --p-gon with --internal internal
    /// vertices, from the peeling generator.
    #[arg(long, requires_all = ["p", "internal"])]
    pub planar: bool,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub internal: Option<usize>,
    #[arg(long, value_enum, default_value = "summary")]
    pub emit: OracleEmit,
}

pub fn run(a: &OracleArgs) -> anyhow::Result<Artifact> {
    let (e, n, g, perimeters): (Enumeration, i64, usize, Vec<usize>) = if a.planar {
        let (p, k) = (a.p.unwrap(), a.internal.unwrap());
        (enumerate_planar_polygon(p, k)?, (k + p) as i64 - 2, 0, vec![p])
    } else {
        let (Some(n), Some(g)) = (a.n, a.g) else { return Err(usage("give --n and --g, or --planar")) };
        let mut spec = GluingSpec::for_size(n, g, a.perimeters.clone())?;
        spec.cap = a.cap;
        (enumerate_rooted(&spec)?, n, g, a.perimeters.clone())
    };
    match a.emit {
        OracleEmit::Summary => {
            let formula: Option<(BigInt, &str)> = match perimeters.as_slice() {
                [] => pinned_recursion()?.tau(n, g).ok().map(|c| (c, "recursion")),
                &[p] if g == 0 => tau_planar_polygon(n, p as u64).ok().map(|c| (c, "formula")),
                _ => None,
            };
            let count = BigInt::from(e.len());
            let agrees = formula.as_ref().map(|(f, _)| *f == count);
            let mut art = Artifact::new(
                json!({
                    "n": n,
                    "g": g,
                    "perimeters": perimeters,
                    "count": e.len(),
                    "gluings": e.gluings,
                    "invalid": e.invalid,
                    "duplicates": e.duplicates,
                    "exact": formula.as_ref().map(|(f, _)| f.to_string()),
                    "exact_source": formula.as_ref().map(|(_, s)| *s),
                    "agrees": agrees,
                }),
                &["n", "g", "p", "count", "gluings", "invalid", "duplicates", "exact", "agrees"],
                vec![vec![
                    n.to_string(),
                    g.to_string(),
                    crate::common::join(&perimeters, ";"),
                    e.len().to_string(),
                    e.gluings.to_string(),
                    e.invalid.to_string(),
                    e.duplicates.to_string(),
                    formula.as_ref().map(|(f, _)| f.to_string()).unwrap_or_default(),
                    agrees.map(|b| b.to_string()).unwrap_or_default(),
                ]],
            );
            if agrees == Some(false) {
                art.failure = Some(format!("oracle count {count} differs from the exact count"));
            }
            if e.duplicates > 0 {
                art.failure = Some(format!("{} duplicate rooted classes generated", e.duplicates));
            }
            Ok(art)
        }
        OracleEmit::Maps => {
            let mut values = Vec::new();
            let mut rows = Vec::new();
            for (i, t) in e.maps.iter().enumerate() {
                let s = t.to_json();
                values.push(json!({ "index": i, "code": t.code(), "map": serde_json::from_str::<Value>(&s)? }));
                rows.push(vec![i.to_string(), crate::common::code_string(t.code().as_slice()), s]);
            }
            Ok(Artifact::new(json!({ "maps": values }), &["index", "code", "map"], rows))
        }
    }
}
