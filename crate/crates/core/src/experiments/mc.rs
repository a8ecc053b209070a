//! Monte Carlo checks of the one-step peeling laws and of the samplers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{mean_stderr, par_samples, three_sigma, ExperimentError, ExperimentReport, Status};
use crate::enumeration::{d_of_lambda, LambdaParams};
use crate::oracle::exact_boltzmann_law;
use crate::samplers::laws::FiniteOutcome;
use crate::samplers::{
    sample_boltzmann_bounded, HalfPlaneCase, HalfPlaneVariant, Model, SamplerContext, SamplerError, StepKind,
    StepRecord,
};

fn nonzero(n: u64) -> Result<(), ExperimentError> {
    if n == 0 {
        return Err(ExperimentError::Domain("at least one sample is needed".into()));
    }
    Ok(())
}

/// `E[1/deg(ρ)]` in `𝕋_λ`, against `d(λ)`.
pub fn mc_inverse_root_degree(params: LambdaParams, n: u64, seed: u64) -> Result<ExperimentReport, ExperimentError> {
    nonzero(n)?;
    let ctx = SamplerContext::new(params, Model::Plane)?;
    let xs = par_samples(seed, n, |rng| {
        let mut f = ctx.frontier(rng)?;
        f.explore_ball(1)?;
        Ok(1.0 / f.root_degree() as f64)
    })?;
    let (mean, stderr) = mean_stderr(&xs);
    let target = d_of_lambda(params.lambda)?;
    let mut r = ExperimentReport::new("inverse-root-degree").param("lambda", params.lambda);
    r.estimate = Some(mean);
    r.exact_or_target = Some(target);
    r.stderr = stderr;
    r.n_samples = n;
    r.seed = Some(seed);
    r.verdict = three_sigma(mean, target, stderr);
    r.criterion = "|estimate − d(λ)| ≤ 3·stderr".into();
    Ok(r)
}

/// Finite patterns at the root edge of a half-plane triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkovPattern {
    /// The root triangle has a new third vertex: `βλ`.
    CaseI,
    /// As `CaseI`, and so does the triangle on the left side of the first: `(βλ)²`.
    CaseITwice,
    /// The root triangle swallows one edge to its left and the 2-gon it
    /// encloses is empty: `β^{−1}`.
    LeftEmptyFill,
}

impl MarkovPattern {
    pub fn target(self, beta: f64, lambda: f64) -> f64 {
        match self {
            MarkovPattern::CaseI => beta * lambda,
            MarkovPattern::CaseITwice => (beta * lambda).powi(2),
            MarkovPattern::LeftEmptyFill => 1.0 / beta,
        }
    }
}

/// The kind of a step, or `None` for a swallow too long to materialise,
/// which no pattern contains.
fn step_kind(r: Result<StepRecord, SamplerError>) -> Result<Option<StepKind>, ExperimentError> {
    match r {
        Ok(rec) => Ok(Some(rec.kind)),
        Err(SamplerError::Budget { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Empirical frequency of `pattern ⊂ sample` against its closed-form weight.
pub fn mc_markov_check(
    params: LambdaParams,
    variant: HalfPlaneVariant,
    pattern: MarkovPattern,
    n: u64,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    nonzero(n)?;
    let ctx = SamplerContext::new(params, Model::HalfPlane(variant))?;
    let xs = par_samples(seed, n, |rng| {
        let mut f = ctx.frontier(rng)?;
        let h = f.infinite_hole().expect("half-plane hole");
        let root = f.explorer().hole(h).expect("hole")[0];
        let first = step_kind(f.peel_side(root))?;
        let hit = match pattern {
            MarkovPattern::CaseI => first == Some(StepKind::HalfPlane(HalfPlaneCase::NewVertex)),
            MarkovPattern::CaseITwice => {
                if first != Some(StepKind::HalfPlane(HalfPlaneCase::NewVertex)) {
                    false
                } else {
                    let h = f.infinite_hole().expect("half-plane hole");
                    let side = f.explorer().hole(h).expect("hole")[0];
                    step_kind(f.peel_side(side))? == Some(StepKind::HalfPlane(HalfPlaneCase::NewVertex))
                }
            }
            MarkovPattern::LeftEmptyFill => {
                if first != Some(StepKind::HalfPlane(HalfPlaneCase::Left(1))) {
                    false
                } else {
                    let inf = f.infinite_hole();
                    let hole = f.explorer().live_holes().into_iter().find(|&x| Some(x) != inf).expect("finite hole");
                    let side = f.explorer().hole(hole).expect("hole")[0];
                    step_kind(f.peel_side(side))? == Some(StepKind::Finite(FiniteOutcome::Close))
                }
            }
        };
        Ok(if hit { 1.0 } else { 0.0 })
    })?;
    let (mean, stderr) = mean_stderr(&xs);
    let beta = variant.beta(&params);
    let target = pattern.target(beta, params.lambda);
    let mut r = ExperimentReport::new("markov-pattern")
        .param("lambda", params.lambda)
        .param("variant", variant)
        .param("pattern", pattern)
        .param("beta", beta);
    r.estimate = Some(mean);
    r.exact_or_target = Some(target);
    r.stderr = stderr;
    r.n_samples = n;
    r.seed = Some(seed);
    r.verdict = three_sigma(mean, target, stderr);
    r.criterion = "|frequency − β^{|∂*t|−|∂t|}λ^{|t_in|}| ≤ 3·stderr".into();
    Ok(r)
}

/// Pearson χ² test of the Boltzmann sampler of the `p`-gon against the
/// exact law of its atoms with at most `max_internal` internal vertices;
/// all larger outcomes form one extra bin. Bins with expected count below
/// five are pooled.
pub fn boltzmann_chi_square(
    p: usize,
    params: LambdaParams,
    max_internal: usize,
    n: u64,
    seed: u64,
    significance: f64,
) -> Result<ExperimentReport, ExperimentError> {
    nonzero(n)?;
    let atoms = exact_boltzmann_law(p, &params, max_internal)?;
    let index: BTreeMap<_, usize> = atoms.iter().enumerate().map(|(i, (t, _, _))| (t.code(), i)).collect();
    let other = atoms.len();
    let ctx = SamplerContext::new(params, Model::Boltzmann(p))?;
    let bins = par_samples(seed, n, |rng| {
        Ok(match sample_boltzmann_bounded(&ctx, rng, max_internal)? {
            None => Some(other),
            Some(t) => index.get(&t.code()).copied(),
        })
    })?;
    let mut observed = vec![0u64; atoms.len() + 1];
    let mut unmatched = 0u64;
    for b in bins {
        match b {
            Some(i) => observed[i] += 1,
            None => unmatched += 1,
        }
    }
    let mut prob: Vec<f64> = atoms.iter().map(|a| a.2).collect();
    prob.push(1.0 - prob.iter().sum::<f64>());
    let expected: Vec<f64> = prob.iter().map(|q| q * n as f64).collect();

    // pool small bins, smallest expectation first
    let mut order: Vec<usize> = (0..expected.len()).collect();
    order.sort_by(|&a, &b| expected[a].total_cmp(&expected[b]).then(a.cmp(&b)));
    let mut cells: Vec<(f64, u64)> = Vec::new();
    let mut pool = (0.0, 0u64);
    for &i in &order {
        pool = (pool.0 + expected[i], pool.1 + observed[i]);
        if pool.0 >= 5.0 {
            cells.push(pool);
            pool = (0.0, 0);
        }
    }
    if pool.0 > 0.0 || pool.1 > 0 {
        match cells.last_mut() {
            Some(c) => *c = (c.0 + pool.0, c.1 + pool.1),
            None => cells.push(pool),
        }
    }
    let stat: f64 = cells.iter().map(|&(e, o)| (o as f64 - e).powi(2) / e).sum();
    let df = cells.len().saturating_sub(1);

    let mut r = ExperimentReport::new("boltzmann-chi-square")
        .param("p", p)
        .param("lambda", params.lambda)
        .param("max_internal", max_internal)
        .param("significance", significance);
    r.n_samples = n;
    r.seed = Some(seed);
    r.estimate = Some(stat);
    r.criterion = format!("χ² p-value ≥ {significance}, every sampled atom in the exact table");
    r.columns = vec!["atom".into(), "internal".into(), "probability".into(), "expected".into(), "observed".into()];
    for (i, (_, v, q)) in atoms.iter().enumerate() {
        r.rows.push(vec![Value::from(i), Value::from(*v), Value::from(*q), Value::from(expected[i]), Value::from(observed[i])]);
    }
    r.rows.push(vec![
        Value::from("larger"),
        Value::Null,
        Value::from(prob[other]),
        Value::from(expected[other]),
        Value::from(observed[other]),
    ]);
    r.notes.push(format!("{} bins after pooling, {df} degrees of freedom", cells.len()));
    if unmatched > 0 {
        r.notes.push(format!("{unmatched} small samples missing from the exact table"));
        r.verdict = Status::Fail;
        return Ok(r);
    }
    if df == 0 {
        r.verdict = Status::Inconclusive;
        return Ok(r);
    }
    let dist = ChiSquared::new(df as f64).map_err(|e| ExperimentError::Domain(e.to_string()))?;
    let pval = dist.sf(stat);
    r.exact_or_target = Some(dist.inverse_cdf(1.0 - significance));
    r.parameters.insert("p_value".into(), Value::from(pval));
    r.verdict = Status::from_bool(pval >= significance);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::LAMBDA_C;

    #[test]
    fn single_sample_is_inconclusive() {
        let r = mc_inverse_root_degree(LambdaParams::critical(), 1, 0).unwrap();
        assert_eq!(r.stderr, None);
        assert_eq!(r.verdict, Status::Inconclusive);
        assert!(mc_inverse_root_degree(LambdaParams::critical(), 0, 0).is_err());
    }

    #[test]
    fn case_one_frequency_at_criticality() {
        let r = mc_markov_check(LambdaParams::critical(), HalfPlaneVariant::Hyperbolic, MarkovPattern::CaseI, 20_000, 5)
            .unwrap();
        assert!((r.exact_or_target.unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-9);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn two_step_and_fill_patterns() {
        let pa = LambdaParams::from_lambda(LAMBDA_C / 2.0).unwrap();
        for v in [HalfPlaneVariant::Hyperbolic, HalfPlaneVariant::Subcritical] {
            for pat in [MarkovPattern::CaseITwice, MarkovPattern::LeftEmptyFill] {
                let r = mc_markov_check(pa, v, pat, 20_000, 9).unwrap();
                assert!(r.passed(), "{v:?} {pat:?}: {r:?}");
            }
        }
    }

    #[test]
    fn boltzmann_small_atoms() {
        let pa = LambdaParams::from_lambda(LAMBDA_C / 2.0).unwrap();
        let r = boltzmann_chi_square(2, pa, 2, 20_000, 3, 1e-3).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }
}
