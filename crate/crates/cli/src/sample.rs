//! `sample`: balls of the infinite models, Boltzmann maps and uniform small maps.

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use hyptri::oracle::{ball_code, BallKind};
use hyptri::samplers::{
    sample_ball, sample_boltzmann, stream, HalfPlaneVariant, Model, SamplerContext, UniformCorpus,
};
use hyptri::TriangulationWithHoles;

use crate::common::{code_string, LambdaArgs, RootingArg};
use crate::output::{usage, Artifact};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// The hyperbolic half-plane ℍ_λ.
    Hyperbolic,
    /// The subcritical half-plane H̃_λ.
    Subcritical,
    /// The plane triangulation 𝕋_λ.
    Plane,
    /// The PSHT 𝕋_λ^(p) (needs --perimeter).
    Psht,
    /// A Boltzmann triangulation of the p-gon (needs --perimeter).
    Boltzmann,
    /// A uniform element of 𝒯_𝐩(n, g) from the oracle (needs --n, --g).
    Uniform,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub variant: Variant,
    #[command(flatten)]
    #[serde(flatten)]
    pub lambda: LambdaArgs,
    /// Root perimeter for psht and boltzmann.
    #[arg(long)]
    pub perimeter: Option<usize>,
    /// Emit the ball of this radius around the root. Infinite models
    /// default to 2; finite ones emit the whole map when absent.
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Size index for uniform.
    #[arg(long)]
    pub n: Option<i64>,
    /// Genus for uniform.
    #[arg(long)]
    pub g: Option<usize>,
    /// Boundary perimeters for uniform, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub perimeters: Vec<usize>,
    /// Root law for uniform.
    #[arg(long, value_enum, default_value = "boundary-edge")]
    pub rooting: RootingArg,
    /// Half-edge budget of one exploration.
    #[arg(long)]
    pub budget: Option<usize>,
}

enum Drawn {
    Ball(Vec<u32>),
    Map(TriangulationWithHoles),
}

fn ball_row(i: u64, code: &[u32]) -> (Value, Vec<String>) {
    let half_edges = code.first().copied().unwrap_or(0);
    (
        json!({ "index": i, "edges": half_edges / 2, "code": code }),
        vec![i.to_string(), (half_edges / 2).to_string(), code_string(code)],
    )
}

fn map_row(i: u64, t: &TriangulationWithHoles) -> anyhow::Result<(Value, Vec<String>)> {
    let s = t.to_json();
    let v = json!({
        "index": i,
        "triangles": t.num_triangles(),
        "internal_vertices": t.num_internal_vertices(),
        "genus": t.genus(),
        "map": serde_json::from_str::<Value>(&s)?,
    });
    Ok((v, vec![i.to_string(), t.num_triangles().to_string(), t.num_internal_vertices().to_string(), t.genus().to_string(), s]))
}

pub fn run(a: &SampleArgs) -> anyhow::Result<Artifact> {
    let perimeter = || a.perimeter.ok_or_else(|| usage("this variant needs --perimeter"));
    let drawn: Vec<Drawn> = if a.variant == Variant::Uniform {
        let (Some(n), Some(g)) = (a.n, a.g) else { return Err(usage("uniform needs --n and --g")) };
        let corpus = UniformCorpus::new(n, g, a.perimeters.clone())?;
        if corpus.is_empty() {
            return Err(usage(format!("the class ({n}, {g}, {:?}) is empty", a.perimeters)));
        }
        (0..a.count)
            .into_par_iter()
            .map(|i| {
                let t = corpus.sample_rooted(&mut stream(a.seed, i), a.rooting.into()).expect("nonempty corpus");
                match a.radius {
                    Some(r) => Drawn::Ball(ball_code(&t, r, BallKind::Metric).0),
                    None => Drawn::Map(t),
                }
            })
            .collect()
    } else {
        let model = match a.variant {
            Variant::Hyperbolic => Model::HalfPlane(HalfPlaneVariant::Hyperbolic),
            Variant::Subcritical => Model::HalfPlane(HalfPlaneVariant::Subcritical),
            Variant::Plane => Model::Plane,
            Variant::Psht => Model::Psht(perimeter()?),
            Variant::Boltzmann => Model::Boltzmann(perimeter()?),
            Variant::Uniform => unreachable!(),
        };
        let mut ctx = SamplerContext::new(a.lambda.resolve()?, model)?;
        if let Some(b) = a.budget {
            ctx = ctx.with_budget(b);
        }
        let whole = matches!(model, Model::Boltzmann(_)) && a.radius.is_none();
        let r = a.radius.unwrap_or(2);
        (0..a.count)
            .into_par_iter()
            .map(|i| {
                Ok(if whole {
                    Drawn::Map(sample_boltzmann(&ctx, stream(a.seed, i))?)
                } else {
                    Drawn::Ball(sample_ball(&ctx, stream(a.seed, i), r)?.code().0)
                })
            })
            .collect::<anyhow::Result<_>>()?
    };
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for (i, d) in drawn.iter().enumerate() {
        let (v, row) = match d {
            Drawn::Ball(c) => ball_row(i as u64, c),
            Drawn::Map(t) => map_row(i as u64, t)?,
        };
        values.push(v);
        rows.push(row);
    }
    let columns: &[&str] = match drawn.first() {
        Some(Drawn::Map(_)) => &["index", "triangles", "internal_vertices", "genus", "map"],
        _ => &["index", "edges", "code"],
    };
    Ok(Artifact::new(json!({ "samples": values }), columns, rows))
}
