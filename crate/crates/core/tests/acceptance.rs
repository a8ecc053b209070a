//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use hyptri::enumeration::{
    d_of_lambda, h_of_lambda, harmonicity_residual, lambda_of_theta, peeling_mass, tau_planar_polygon,
    GjRecursion, LambdaParams, LAMBDA_C,
};
use hyptri::experiments::exact::ORACLE_PERIMETERS;
use hyptri::experiments::{
    boltzmann_chi_square, boundary_event_table, mc_inverse_root_degree, mc_markov_check, planar_ratio_check,
    ratio_checks, sandwich_check, tv_distance_balls, tv_trend, vertex_ratio_check, MarkovPattern, RatioRange,
};
use hyptri::oracle::{enumerate_planar_polygon, enumerate_rooted, GluingSpec, OracleError, Rooting, DEFAULT_CAP};
use hyptri::peeling::{peel_explore, rebuild, surgery_injectivity, Algorithm};
use hyptri::rooted_isomorphic;
use hyptri::samplers::{
    sample_ball, sample_boltzmann, stream, HalfPlaneVariant, Model, SamplerContext,
};
use hyptri::TriangulationWithHoles;

type Outcome = Result<String, String>;
type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_count(spec: &GluingSpec) -> Result<BigInt, String> {
    match enumerate_rooted(spec) {
        Ok(e) => Ok(BigInt::from(e.len())),
        Err(OracleError::Domain(_)) => Ok(BigInt::from(0)),
        Err(e) => Err(e.to_string()),
    }
}

fn exact_counts() -> Outcome {
    let start = Instant::now();
    let mut compared = 0;
    let mut bad = Vec::new();
    for p in 1..=8usize {
        let s = p as i64 - 2;
        for n in (s + 1).div_euclid(2)..=(DEFAULT_CAP as i64 + s) / 2 {
            let spec = GluingSpec::for_size(n, 0, vec![p]).map_err(|e| e.to_string())?;
            let brute = oracle_count(&spec)?;
            let formula = if n >= s { tau_planar_polygon(n, p as u64).map_err(|e| e.to_string())? } else { BigInt::from(0) };
            compared += 1;
            if brute != formula {
                bad.push(format!("p={p} n={n}: gluing {brute} vs formula {formula}"));
            }
        }
    }
    let mut gj = GjRecursion::seeded(&BigInt::from(4)).map_err(|e| e.to_string())?;
    for g in 0..=1usize {
        for n in 1..=(DEFAULT_CAP as i64 / 2) {
            let brute = oracle_count(&GluingSpec::closed(2 * n as usize, Some(g)))?;
            let rec = gj.tau(n, g).map_err(|e| e.to_string())?;
            compared += 1;
            if brute != rec {
                bad.push(format!("n={n} g={g}: gluing {brute} vs recursion {rec}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        bad.is_empty() && secs < 300.0,
        format!("{compared} instances agree, {secs:.1} s{}", if bad.is_empty() { String::new() } else { format!("; {bad:?}") }),
    )
}

fn sandwich() -> Outcome {
    let table = sandwich_check(60, 15).map_err(|e| e.to_string())?;
    let ratio = vertex_ratio_check(DEFAULT_CAP).map_err(|e| e.to_string())?;
    check(
        table.passed() && ratio.passed(),
        format!(
            "sandwich on {} table entries ({} failures), vertex ratio on {} oracle pairs ({} failures)",
            table.n_samples,
            table.estimate.unwrap_or(f64::NAN),
            ratio.n_samples,
            ratio.estimate.unwrap_or(f64::NAN)
        ),
    )
}

fn parameter_algebra() -> Outcome {
    let h = h_of_lambda(LAMBDA_C).map_err(|e| e.to_string())?;
    let d = d_of_lambda(LAMBDA_C).map_err(|e| e.to_string())?;
    let l0 = lambda_of_theta(0.0).map_err(|e| e.to_string())?;
    let grid: Vec<f64> = (1..=1000)
        .map(|i| d_of_lambda(LAMBDA_C * i as f64 / 1000.0))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    check(
        (h - 0.25).abs() < 1e-12 && (d - 1.0 / 6.0).abs() < 1e-12 && (l0 - LAMBDA_C).abs() < 1e-10 && increasing,
        format!(
            "|h−1/4| = {:.1e}, |d−1/6| = {:.1e}, |λ(0)−λ_c| = {:.1e}, d increasing on 1000 points: {increasing}",
            (h - 0.25).abs(),
            (d - 1.0 / 6.0).abs(),
            (l0 - LAMBDA_C).abs()
        ),
    )
}

fn normalization() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    let mut ok = true;
    for lambda in [LAMBDA_C, LAMBDA_C / 2.0, LAMBDA_C / 10.0] {
        let pa = LambdaParams::from_lambda(lambda).map_err(|e| e.to_string())?;
        for beta in [pa.beta_hyp, pa.beta_sub] {
            let m = peeling_mass(&pa, beta, 1_000_000);
            ok &= m.contains(1.0, 1e-8);
            worst = worst.max(m.distance_to(1.0));
            let res = harmonicity_residual(&pa, beta, 3, 2, 1_000_000);
            ok &= res < 1e-8;
            worst_res = worst_res.max(res);
        }
    }
    let pa = LambdaParams::from_lambda(LAMBDA_C / 2.0).map_err(|e| e.to_string())?;
    let off = harmonicity_residual(&pa, 0.5 * (pa.beta_hyp + pa.beta_sub), 3, 2, 1_000_000);
    ok &= off > 1e-3;
    check(
        ok,
        format!("max mass distance {worst:.1e}, max residual at roots {worst_res:.1e}, off-root residual {off:.3e}"),
    )
}

fn monte_carlo() -> Outcome {
    let pa = LambdaParams::critical();
    let start = Instant::now();
    let case1 = mc_markov_check(pa, HalfPlaneVariant::Hyperbolic, MarkovPattern::CaseI, 100_000, 11)
        .map_err(|e| e.to_string())?;
    let case1_secs = start.elapsed().as_secs_f64();
    let deg = mc_inverse_root_degree(pa, 100_000, 12).map_err(|e| e.to_string())?;
    let half = LambdaParams::from_lambda(LAMBDA_C / 2.0).map_err(|e| e.to_string())?;
    let chi = boltzmann_chi_square(2, half, 2, 100_000, 13, 1e-3).map_err(|e| e.to_string())?;
    let p = chi.parameters.get("p_value").and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
    check(
        case1.passed() && case1_secs < 60.0 && deg.passed() && chi.passed(),
        format!(
            "Case I {:.5} ± {:.5} vs {:.5} ({case1_secs:.1} s); E[1/deg] {:.5} ± {:.5} vs {:.5}; χ² p-value {p:.3}",
            case1.estimate.unwrap(),
            case1.stderr.unwrap_or(f64::NAN),
            case1.exact_or_target.unwrap(),
            deg.estimate.unwrap(),
            deg.stderr.unwrap_or(f64::NAN),
            deg.exact_or_target.unwrap()
        ),
    )
}

/// Every gluing-oracle triangulation with a boundary, plus planar polygons
/// from the peeling generator up to ten triangles.
fn oracle_corpus() -> Vec<TriangulationWithHoles> {
    let mut corpus = Vec::new();
    for &p in ORACLE_PERIMETERS.iter().filter(|p| !p.is_empty()) {
        for t in 0..=DEFAULT_CAP {
            if let Ok(e) = enumerate_rooted(&GluingSpec::with_boundaries(t, p.to_vec(), None)) {
                corpus.extend(e.maps);
            }
        }
    }
    for p in 1..=4usize {
        for internal in 0..=(12 - p) / 2 {
            if let Ok(e) = enumerate_planar_polygon(p, internal) {
                if e.maps.first().is_some_and(|t| t.num_triangles() > DEFAULT_CAP) {
                    corpus.extend(e.maps);
                }
            }
        }
    }
    corpus
}

fn round_trip(corpus: &[TriangulationWithHoles]) -> Outcome {
    let algorithms = [Algorithm::Metric, Algorithm::Left, Algorithm::Random { seed: 17 }];
    let failures: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, t)| {
            algorithms.iter().filter_map(move |a| {
                let r = match peel_explore(t, a) {
                    Ok(r) => r,
                    Err(e) => return Some(format!("map {i} {a:?}: {e}")),
                };
                let c = r.diagram.type_counts();
                if c.ii != t.num_internal_vertices() || c.v != t.genus() {
                    return Some(format!("map {i} {a:?}: type counts {c:?}"));
                }
                match rebuild(&r.diagram, a) {
                    Ok(b) if rooted_isomorphic(t.map(), b.map()) => None,
                    Ok(_) => Some(format!("map {i} {a:?}: rebuilt map differs")),
                    Err(e) => Some(format!("map {i} {a:?}: {e}")),
                }
            })
        })
        .collect();
    check(
        failures.is_empty(),
        format!(
            "{} explorations of {} maps, {} failures{}",
            3 * corpus.len(),
            corpus.len(),
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn surgery(corpus: &[TriangulationWithHoles]) -> Outcome {
    let g1: Vec<TriangulationWithHoles> = corpus.iter().filter(|t| t.genus() == 1).cloned().collect();
    let r = surgery_injectivity(&g1, 1).map_err(|e| e.to_string())?;
    check(
        r.injective() && r.inputs > 0 && r.rebuilt == r.inputs,
        format!(
            "{} genus-1 maps, {} satisfy the split condition, {} triples → {} distinct outputs, {} rebuilt",
            r.triangulations, r.satisfying, r.inputs, r.distinct_outputs, r.rebuilt
        ),
    )
}

fn convergence() -> Outcome {
    let ratio = planar_ratio_check(200).map_err(|e| e.to_string())?;
    let trend = tv_trend(2, 1..=8, 1, 100_000, 21).map_err(|e| e.to_string())?;
    let tvs: Vec<String> = trend.rows.iter().map(|r| format!("{:.4}", r[4].as_f64().unwrap_or(f64::NAN))).collect();
    check(
        ratio.passed() && trend.passed(),
        format!(
            "τ_1(199,0)/τ_1(200,0) = {:.6} vs λ_c = {LAMBDA_C:.6}; TV over p = 1..8: [{}] (bias bound {:.3})",
            ratio.estimate.unwrap(),
            tvs.join(", "),
            trend.bias_bound.unwrap_or(f64::NAN)
        ),
    )
}

/// Serialised output of every sampler and experiment at small sizes.
fn reproducible_outputs() -> Vec<(String, String)> {
    let mut out = Vec::new();
    let half = LambdaParams::from_lambda(LAMBDA_C / 2.0).unwrap();
    let models = [
        (LambdaParams::critical(), Model::HalfPlane(HalfPlaneVariant::Hyperbolic), 2),
        (half, Model::HalfPlane(HalfPlaneVariant::Hyperbolic), 1),
        (half, Model::HalfPlane(HalfPlaneVariant::Subcritical), 2),
        (LambdaParams::critical(), Model::Plane, 2),
        (half, Model::Psht(3), 1),
    ];
    for (pa, model, radius) in models {
        let ctx = SamplerContext::new(pa, model).unwrap();
        let codes: Vec<String> = (0..200u64)
            .into_par_iter()
            .map(|i| format!("{:?}", sample_ball(&ctx, stream(5, i), radius).map(|b| b.code())))
            .collect();
        out.push((format!("{model:?}"), codes.join("\n")));
    }
    let ctx = SamplerContext::new(half, Model::Boltzmann(3)).unwrap();
    let maps: Vec<String> = (0..200u64)
        .into_par_iter()
        .map(|i| sample_boltzmann(&ctx, stream(6, i)).map(|t| t.to_json()).unwrap_or_else(|e| e.to_string()))
        .collect();
    out.push(("boltzmann".into(), maps.join("\n")));
    let reports = [
        mc_inverse_root_degree(half, 2000, 1),
        mc_markov_check(half, HalfPlaneVariant::Subcritical, MarkovPattern::LeftEmptyFill, 5000, 2),
        boltzmann_chi_square(2, half, 2, 5000, 3, 1e-3),
        tv_distance_balls(3, 0, &[3], 1, None, Rooting::UniformBoundaryEdge, 2000, 4),
        tv_trend(1, 1..=5, 1, 2000, 5),
        boundary_event_table(1, 0, &[1, 1], 1),
        ratio_checks(RatioRange { planar_n: 50, table_n: 20, table_g: 4, oracle_cap: 4 }),
    ];
    for r in reports {
        let r = r.unwrap();
        out.push((r.name.clone(), r.to_json() + &r.to_csv()));
    }
    out
}

fn determinism() -> Outcome {
    let pool = |k| rayon::ThreadPoolBuilder::new().num_threads(k).build().unwrap();
    let a = pool(1).install(reproducible_outputs);
    let b = pool(1).install(reproducible_outputs);
    let c = pool(8).install(reproducible_outputs);
    let differing: Vec<&str> = a
        .iter()
        .zip(&b)
        .zip(&c)
        .filter(|((x, y), z)| x.1 != y.1 || x.1 != z.1)
        .map(|((x, _), _)| x.0.as_str())
        .collect();
    check(
        differing.is_empty() && a.len() == c.len(),
        format!("{} outputs identical across two runs and 1 vs 8 threads{}", a.len(), if differing.is_empty() { String::new() } else { format!("; differing: {differing:?}") }),
    )
}

fn main() {
    let corpus = oracle_corpus();
    let criteria: Vec<Check> = vec![
        ("exact-count agreement", Box::new(exact_counts)),
        ("sandwich bounds", Box::new(sandwich)),
        ("parameter algebra", Box::new(parameter_algebra)),
        ("peeling-law normalization", Box::new(normalization)),
        ("Monte Carlo laws", Box::new(monte_carlo)),
        ("diagram round trip", Box::new(|| round_trip(&corpus))),
        ("surgery injectivity", Box::new(|| surgery(&corpus))),
        ("convergence surrogates", Box::new(convergence)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {} {name}: {d} [{secs:.1} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {} {name}: {d} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
