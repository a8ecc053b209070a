//! `verify`: the invariant suite at desk-check sizes. Each check mirrors one
//! acceptance criterion with smaller inputs.

use std::time::Instant;

use clap::Args;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use hyptri::enumeration::{
    d_of_lambda, h_of_lambda, harmonicity_residual, lambda_of_theta, peeling_mass, tau_planar_polygon, LambdaParams,
    LAMBDA_C,
};
use hyptri::experiments::exact::ORACLE_PERIMETERS;
use hyptri::experiments::{
    boltzmann_chi_square, mc_inverse_root_degree, mc_markov_check, planar_ratio_check, sandwich_check, tv_trend,
    vertex_ratio_check, MarkovPattern,
};
use hyptri::oracle::{enumerate_planar_polygon, enumerate_rooted, GluingSpec, OracleError, DEFAULT_CAP};
use hyptri::peeling::{peel_explore, rebuild, surgery_injectivity, Algorithm};
use hyptri::samplers::{sample_ball, stream, HalfPlaneVariant, Model, SamplerContext};
use hyptri::{rooted_isomorphic, TriangulationWithHoles};

use crate::common::info;
use crate::enumerate::pinned_recursion;
use crate::output::Artifact;

#[derive(Args, Clone, Debug, Serialize)]
pub struct VerifyArgs {
    /// Monte Carlo sample size of the statistical checks.
    #[arg(long, default_value_t = 20_000)]
    pub samples: u64,
    /// Base seed of the statistical checks.
    #[arg(long, default_value_t = 11)]
    pub seed: u64,
}

type Outcome = anyhow::Result<(bool, String)>;
type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn oracle_count(spec: &GluingSpec) -> anyhow::Result<BigInt> {
    match enumerate_rooted(spec) {
        Ok(e) => Ok(BigInt::from(e.len())),
        Err(OracleError::Domain(_)) => Ok(BigInt::from(0)),
        Err(e) => Err(e.into()),
    }
}

fn exact_counts() -> Outcome {
    let mut bad = Vec::new();
    let mut compared = 0;
    for p in 1..=5usize {
        let s = p as i64 - 2;
        for n in (s + 1).div_euclid(2)..=(DEFAULT_CAP as i64 + s) / 2 {
            let brute = oracle_count(&GluingSpec::for_size(n, 0, vec![p])?)?;
            let formula = if n >= s { tau_planar_polygon(n, p as u64)? } else { BigInt::from(0) };
            compared += 1;
            if brute != formula {
                bad.push(format!("p={p} n={n}"));
            }
        }
    }
    let mut gj = pinned_recursion()?;
    for g in 0..=1usize {
        for n in 1..=(DEFAULT_CAP as i64 / 2) {
            compared += 1;
            if oracle_count(&GluingSpec::closed(2 * n as usize, Some(g)))? != gj.tau(n, g)? {
                bad.push(format!("closed n={n} g={g}"));
            }
        }
    }
    Ok((bad.is_empty(), format!("{compared} instances, disagreements: {bad:?}")))
}

fn sandwich() -> Outcome {
    let t = sandwich_check(30, 6)?;
    let v = vertex_ratio_check(4)?;
    Ok((t.passed() && v.passed(), format!("{} table entries, {} oracle pairs", t.n_samples, v.n_samples)))
}

fn parameter_algebra() -> Outcome {
    let h = h_of_lambda(LAMBDA_C)?;
    let d = d_of_lambda(LAMBDA_C)?;
    let l0 = lambda_of_theta(0.0)?;
    let grid: Vec<f64> = (1..=1000).map(|i| d_of_lambda(LAMBDA_C * i as f64 / 1000.0)).collect::<Result<_, _>>()?;
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    let c = LambdaParams::critical();
    let ok = (h - 0.25).abs() < 1e-12
        && (d - 1.0 / 6.0).abs() < 1e-12
        && (l0 - LAMBDA_C).abs() < 1e-10
        && increasing
        && c.beta_hyp == 12.0
        && c.beta_sub == 12.0;
    Ok((ok, format!("h(λ_c) = {h}, d(λ_c) = {d}, λ(0) = {l0}, d increasing: {increasing}")))
}

fn normalization() -> Outcome {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for lambda in [LAMBDA_C, LAMBDA_C / 2.0, LAMBDA_C / 10.0] {
        let pa = LambdaParams::from_lambda(lambda)?;
        for beta in [pa.beta_hyp, pa.beta_sub] {
            let m = peeling_mass(&pa, beta, 1_000_000);
            ok &= m.contains(1.0, 1e-8) && harmonicity_residual(&pa, beta, 3, 2, 1_000_000) < 1e-8;
            worst = worst.max(m.distance_to(1.0));
        }
    }
    Ok((ok, format!("max mass distance {worst:.1e}")))
}

fn monte_carlo(n: u64, seed: u64) -> Outcome {
    let pa = LambdaParams::critical();
    let half = LambdaParams::from_lambda(LAMBDA_C / 2.0)?;
    let case1 = mc_markov_check(pa, HalfPlaneVariant::Hyperbolic, MarkovPattern::CaseI, n, seed)?;
    let fill = mc_markov_check(half, HalfPlaneVariant::Subcritical, MarkovPattern::LeftEmptyFill, n, seed + 1)?;
    let deg = mc_inverse_root_degree(pa, n, seed + 2)?;
    let chi = boltzmann_chi_square(2, half, 2, n, seed + 3, 1e-3)?;
    let all = [&case1, &fill, &deg, &chi];
    let detail = all.iter().map(|r| format!("{} {:?}", r.name, r.verdict)).collect::<Vec<_>>().join(", ");
    Ok((all.iter().all(|r| r.passed()), detail))
}

fn small_corpus() -> anyhow::Result<Vec<TriangulationWithHoles>> {
    let mut corpus = Vec::new();
    for p in ORACLE_PERIMETERS.iter().filter(|p| !p.is_empty()) {
        for t in 0..=4 {
            if let Ok(e) = enumerate_rooted(&GluingSpec::with_boundaries(t, p.to_vec(), None)) {
                corpus.extend(e.maps);
            }
        }
    }
    for p in 1..=3usize {
        for internal in 0..=(8 - p) / 2 {
            let e = enumerate_planar_polygon(p, internal)?;
            corpus.extend(e.maps.into_iter().filter(|t| t.num_triangles() > 4));
        }
    }
    Ok(corpus)
}

fn round_trip(corpus: &[TriangulationWithHoles]) -> Outcome {
    let algs = [Algorithm::Metric, Algorithm::Left, Algorithm::Random { seed: 17 }];
    let failures = corpus
        .par_iter()
        .map(|t| {
            algs.iter()
                .filter(|a| {
                    let Ok(r) = peel_explore(t, *a) else { return true };
                    let c = r.diagram.type_counts();
                    let counts_ok = c.ii == t.num_internal_vertices() && c.v == t.genus();
                    !(counts_ok && rebuild(&r.diagram, *a).is_ok_and(|b| rooted_isomorphic(t.map(), b.map())))
                })
                .count()
        })
        .sum::<usize>();
    Ok((failures == 0, format!("{} explorations, {failures} failures", 3 * corpus.len())))
}

fn surgery() -> Outcome {
    let mut g1 = Vec::new();
    for p in ORACLE_PERIMETERS.iter().filter(|p| !p.is_empty()) {
        for t in 0..=DEFAULT_CAP {
            if let Ok(e) = enumerate_rooted(&GluingSpec::with_boundaries(t, p.to_vec(), Some(1))) {
                g1.extend(e.maps);
            }
        }
    }
    let r = surgery_injectivity(&g1, 1)?;
    Ok((
        r.injective() && r.inputs > 0 && r.rebuilt == r.inputs,
        format!("{} triples, {} distinct outputs", r.inputs, r.distinct_outputs),
    ))
}

fn convergence(n: u64, seed: u64) -> Outcome {
    let ratio = planar_ratio_check(200)?;
    let trend = tv_trend(2, 1..=6, 1, n, seed)?;
    Ok((ratio.passed() && trend.passed(), format!("ratio {:?}, trend {:?}", ratio.verdict, trend.verdict)))
}

fn outputs() -> Vec<String> {
    let half = LambdaParams::from_lambda(LAMBDA_C / 2.0).expect("valid λ");
    let models = [
        (LambdaParams::critical(), Model::HalfPlane(HalfPlaneVariant::Hyperbolic)),
        (half, Model::HalfPlane(HalfPlaneVariant::Subcritical)),
        (LambdaParams::critical(), Model::Plane),
    ];
    let mut out = Vec::new();
    for (pa, m) in models {
        let ctx = SamplerContext::new(pa, m).expect("valid model");
        let codes: Vec<String> =
            (0..100u64).into_par_iter().map(|i| format!("{:?}", sample_ball(&ctx, stream(3, i), 2).map(|b| b.code()))).collect();
        out.push(codes.join("\n"));
    }
    if let Ok(r) = mc_inverse_root_degree(half, 500, 4) {
        out.push(r.to_json());
    }
    out
}

fn determinism() -> Outcome {
    let pool = |k| rayon::ThreadPoolBuilder::new().num_threads(k).build();
    let a = pool(1)?.install(outputs);
    let b = pool(1)?.install(outputs);
    let c = pool(4)?.install(outputs);
    Ok((a == b && a == c && a.len() == 4, format!("{} outputs compared across 1 and 4 threads", a.len())))
}

pub fn run(a: &VerifyArgs) -> anyhow::Result<Artifact> {
    let corpus = small_corpus()?;
    let checks: Vec<Check> = vec![
        ("exact-count agreement", Box::new(exact_counts)),
        ("sandwich bounds", Box::new(sandwich)),
        ("parameter algebra", Box::new(parameter_algebra)),
        ("peeling-law normalization", Box::new(normalization)),
        ("Monte Carlo laws", Box::new(|| monte_carlo(a.samples, a.seed))),
        ("diagram round trip", Box::new(|| round_trip(&corpus))),
        ("surgery injectivity", Box::new(surgery)),
        ("convergence surrogates", Box::new(|| convergence(a.samples, a.seed + 10))),
        ("determinism", Box::new(determinism)),
    ];
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for (name, check) in &checks {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e:#}")),
        };
        info(&format!("{} {name}: {detail} [{:.1} s]", if ok { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64()));
        if !ok {
            failed.push(*name);
        }
        let status = if ok { "pass" } else { "fail" };
        results.push(json!({ "check": name, "status": status, "detail": detail }));
        rows.push(vec![name.to_string(), status.to_string(), detail]);
    }
    let mut art = Artifact::new(
        json!({ "checks": results, "passed": checks.len() - failed.len(), "total": checks.len() }),
        &["check", "status", "detail"],
        rows,
    );
    if !failed.is_empty() {
        art.failure = Some(format!("failed checks: {}", failed.join(", ")));
    }
    Ok(art)
}
