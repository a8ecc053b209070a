//! `peel`: peeling explorations of a finite triangulation, as a trace or a diagram.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hyptri::oracle::GluingSpec;
use hyptri::peeling::{filled_in_explore, peel_explore, rebuild, Algorithm};
use hyptri::{rooted_isomorphic, TriangulationWithHoles};

use crate::output::{usage, Artifact};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmArg {
    /// Peel next to a hole vertex closest to the root.
    Metric,
    /// Peel on the hole with the leftmost diagram path.
    Left,
    /// A side chosen from a hash of --seed and the step number.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Emit {
    Trace,
    Diagram,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct PeelArgs {
    /// A triangulation in JSON (`-` for stdin).
    #[arg(long, conflicts_with_all = ["n", "g", "perimeters"])]
    pub input: Option<PathBuf>,
    /// Take map number --index of the oracle class (n, g, perimeters), in canonical order.
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub g: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub perimeters: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    #[arg(long, value_enum, default_value = "metric")]
    pub algorithm: AlgorithmArg,
    /// Seed of the random algorithm.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "trace")]
    pub emit: Emit,
    /// Fill in holes whose complement is a planar triangulation of that hole alone.
    #[arg(long)]
    pub filled_in: bool,
}

fn load(a: &PeelArgs) -> anyhow::Result<TriangulationWithHoles> {
    if let Some(path) = &a.input {
        let mut s = String::new();
        if path.as_os_str() == "-" {
            std::io::stdin().read_to_string(&mut s)?;
        } else {
            s = std::fs::read_to_string(path)?;
        }
        return TriangulationWithHoles::from_json(&s).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    let (Some(n), Some(g)) = (a.n, a.g) else { return Err(usage("give --input or --n and --g")) };
    let spec = GluingSpec::for_size(n, g, a.perimeters.clone())?;
    let e = hyptri::oracle::enumerate_rooted(&spec)?;
    let count = e.len();
    e.maps
        .into_iter()
        .nth(a.index)
        .ok_or_else(|| usage(format!("index {} out of range: the class has {count} maps", a.index)))
}

fn compact(v: &impl Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string(v)?)
}

pub fn run(a: &PeelArgs) -> anyhow::Result<Artifact> {
    let t = load(a)?;
    let alg = match a.algorithm {
        AlgorithmArg::Metric => Algorithm::Metric,
        AlgorithmArg::Left => Algorithm::Left,
        AlgorithmArg::Random => Algorithm::Random { seed: a.seed },
    };
    let res = if a.filled_in { filled_in_explore(&t, &alg, None)? } else { peel_explore(&t, &alg)? };
    let counts = res.diagram.type_counts();
    // a complete exploration must rebuild the map it came from
    let failure = if a.filled_in {
        None
    } else {
        match rebuild(&res.diagram, &alg) {
            Ok(b) if rooted_isomorphic(t.map(), b.map()) => None,
            Ok(_) => Some("the diagram rebuilds a different map".to_string()),
            Err(e) => Some(format!("the diagram does not rebuild: {e}")),
        }
    };
    let mut art = match a.emit {
        Emit::Trace => {
            let mut rows = Vec::new();
            for s in &res.trace.steps {
                rows.push(vec![
                    s.k.to_string(),
                    s.hole_perimeter.to_string(),
                    compact(&s.step)?,
                    s.sigma.to_string(),
                    s.holes_before.to_string(),
                    s.genus_before.to_string(),
                    s.filled.to_string(),
                    s.event.as_ref().map(compact).transpose()?.unwrap_or_default(),
                ]);
            }
            Artifact::new(
                json!({ "algorithm": alg, "type_counts": counts, "trace": res.trace }),
                &["k", "hole_perimeter", "step", "sigma", "holes_before", "genus_before", "filled", "event"],
                rows,
            )
        }
        Emit::Diagram => {
            let d = &res.diagram;
            let rows = d
                .edges
                .iter()
                .map(|e| {
                    Ok(vec![
                        e.from.to_string(),
                        e.to.to_string(),
                        d.label(e.from).to_string(),
                        d.label(e.to).to_string(),
                        compact(&e.label)?,
                    ])
                })
                .collect::<anyhow::Result<_>>()?;
            let diagram: Value = serde_json::from_str(&d.to_json())?;
            Artifact::new(
                json!({ "algorithm": alg, "type_counts": counts, "diagram": diagram }),
                &["from", "to", "from_label", "to_label", "label"],
                rows,
            )
        }
    };
    art.failure = failure;
    Ok(art)
}
