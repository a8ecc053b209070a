//! One-step peeling laws.
//!
//! * Infinite boundary (`ℍ_λ`, `H̃_λ`): a new vertex with probability `βλ`;
//!   swallowing `i` boundary edges to the left (case II) or to the right
//!   (case III) with probability `β^{−i} w(i+1)` each, the swallowed
//!   `(i+1)`-gon being filled by a Boltzmann triangulation.
//! * Finite hole of perimeter `q` filled by a Boltzmann triangulation: a new
//!   vertex with probability `λ w(q+1)/w(q)`, a split into perimeters `(L, R)`
//!   with probability `w(L) w(R)/w(q)`, and for `q = 2` the degenerate fill
//!   with probability `1/w(2)`.
//! * Infinite hole of perimeter `q` of `𝕋_λ^{(p)}`: a new vertex with
//!   probability `λ C_{q+1}/C_q`; a split where the side of perimeter `L`
//!   stays infinite with probability `C_L w(R)/C_q`.

use serde::{Deserialize, Serialize};

use super::rng::{uniform, SamplerRng};
use crate::enumeration::{LambdaParams, WTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HalfPlaneVariant {
    /// `ℍ_λ`, `β = 8 + 1/h`.
    Hyperbolic,
    /// `H̃_λ`, `β = 32h + 4`.
    Subcritical,
}

impl HalfPlaneVariant {
    pub fn beta(self, params: &LambdaParams) -> f64 {
        match self {
            HalfPlaneVariant::Hyperbolic => params.beta_hyp,
            HalfPlaneVariant::Subcritical => params.beta_sub,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HalfPlaneCase {
    /// Case I: the third vertex is new.
    NewVertex,
    /// Case II_i: `i` boundary edges to the left are swallowed.
    Left(usize),
    /// Case III_i: `i` boundary edges to the right are swallowed.
    Right(usize),
}

/// Perimeters `(left, right)` of the two holes created by a split at `j`.
pub fn split_sizes(j: usize, q: usize) -> (usize, usize) {
    if j == 0 {
        (q, 1)
    } else {
        (j, q - j + 1)
    }
}

/// Case law of a half-plane peeling step, tabulated up to `terms` swallowed
/// edges; beyond that the smooth closed form of `w` is integrated numerically
/// and sampled by inversion.
#[derive(Clone, Debug)]
pub struct HalfPlaneLaw {
    pub params: LambdaParams,
    pub beta: f64,
    p_new: f64,
    cum: Vec<f64>,
    tail_x: Vec<f64>,
    tail_cum: Vec<f64>,
}

impl HalfPlaneLaw {
    pub const TERMS: usize = 65536;

    pub fn new(params: LambdaParams, variant: HalfPlaneVariant) -> Self {
        Self::with_beta(params, variant.beta(&params), Self::TERMS)
    }

    pub fn with_beta(params: LambdaParams, beta: f64, terms: usize) -> Self {
        let ln_beta = beta.ln();
        let mut cum = Vec::with_capacity(terms + 1);
        let mut acc = 0.0;
        for i in 0..=terms {
            acc += (params.ln_w(i + 1) - i as f64 * ln_beta).exp();
            cum.push(acc);
        }
        let (tail_x, tail_cum) = tail_grid(&params, beta, terms);
        HalfPlaneLaw { params, beta, p_new: beta * params.lambda, cum, tail_x, tail_cum }
    }

    pub fn terms(&self) -> usize {
        self.cum.len() - 1
    }

    pub fn probability(&self, case: HalfPlaneCase) -> f64 {
        match case {
            HalfPlaneCase::NewVertex => self.p_new,
            HalfPlaneCase::Left(i) | HalfPlaneCase::Right(i) => {
                (self.params.ln_w(i + 1) - i as f64 * self.beta.ln()).exp()
            }
        }
    }

    /// Mass of one side's swallowing cases, including the integrated tail.
    pub fn side_mass(&self) -> f64 {
        self.cum[self.terms()] + self.tail_mass()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_cum.last().copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.p_new + 2.0 * self.side_mass()
    }

    pub fn sample(&self, rng: &mut SamplerRng) -> HalfPlaneCase {
        let side = self.side_mass();
        let u = uniform(rng) * (self.p_new + 2.0 * side);
        if u < self.p_new {
            return HalfPlaneCase::NewVertex;
        }
        let mut x = u - self.p_new;
        let left = x < side;
        if !left {
            x -= side;
        }
        let i = self.swallow_size(x);
        if left {
            HalfPlaneCase::Left(i)
        } else {
            HalfPlaneCase::Right(i)
        }
    }

    fn swallow_size(&self, x: f64) -> usize {
        let m = self.terms();
        if x < self.cum[m] {
            return self.cum.partition_point(|&c| c <= x).min(m);
        }
        let y = x - self.cum[m];
        let k = self.tail_cum.partition_point(|&c| c <= y);
        if k == 0 || k >= self.tail_x.len() {
            return m + 1;
        }
        let (c0, c1) = (self.tail_cum[k - 1], self.tail_cum[k]);
        let (x0, x1) = (self.tail_x[k - 1], self.tail_x[k]);
        let f = if c1 > c0 { (y - c0) / (c1 - c0) } else { 0.0 };
        ((x0 + f * (x1 - x0)).round() as usize).max(m + 1)
    }
}

/// Cumulative Simpson masses of the smooth tail `x ↦ β^{−x} w(x+1)` from `terms + ½`.
fn tail_grid(params: &LambdaParams, beta: f64, terms: usize) -> (Vec<f64>, Vec<f64>) {
    let ln_gamma = params.gamma(beta).ln();
    let ln_t = |x: f64| (4.0 + 32.0 * params.h).ln() + x * ln_gamma + params.ln_w_reduced(x + 1.0);
    let decay = -ln_gamma;
    let start = terms as f64 + 0.5;
    let ln_first = ln_t(start);
    let mut xs = vec![start];
    let mut cum = vec![0.0];
    let mut x = start;
    let mut acc = 0.0;
    let mut prev = ln_first.exp();
    while x < 1e17 {
        let mut dx = x / 64.0;
        if decay > 0.0 {
            dx = dx.min(0.125 / decay);
        }
        let nx = x + dx.max(1.0);
        let lt = ln_t(nx);
        let cur = lt.exp();
        let mid = ln_t(0.5 * (x + nx)).exp();
        acc += (nx - x) * (prev + 4.0 * mid + cur) / 6.0;
        xs.push(nx);
        cum.push(acc);
        if lt < ln_first - 50.0 {
            return (xs, cum);
        }
        // local power-law exponent, used for the remainder past the grid
        let slope = (lt - prev.ln()) / (nx / x).ln();
        x = nx;
        prev = cur;
        if x >= 1e17 && slope < -1.0 {
            acc += cur * x / (-slope - 1.0);
            xs.push(x * 2.0);
            cum.push(acc);
        }
    }
    (xs, cum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiniteOutcome {
    NewVertex,
    Split(usize),
    /// The degenerate fill of a 2-gon: its two sides are glued.
    Close,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfiniteOutcome {
    NewVertex,
    /// Split at `j`, keeping the left (`true`) or right part infinite.
    Split { j: usize, left_infinite: bool },
}

/// `w` and `C` lookups shared by the finite and 𝕋-type laws.
#[derive(Clone, Debug)]
pub struct HoleLaws {
    pub table: WTable,
}

impl HoleLaws {
    pub fn new(params: LambdaParams) -> Self {
        HoleLaws { table: WTable::new(params, 4096) }
    }

    pub fn params(&self) -> &LambdaParams {
        &self.table.params
    }

    /// Probabilities of every outcome for a Boltzmann-filled `q`-gon.
    pub fn finite(&self, q: usize) -> Vec<(FiniteOutcome, f64)> {
        let t = &self.table;
        let lw = t.ln_w(q);
        let mut out = Vec::with_capacity(q + 2);
        out.push((FiniteOutcome::NewVertex, (self.params().lambda.ln() + t.ln_w(q + 1) - lw).exp()));
        for j in 0..q {
            let (l, r) = split_sizes(j, q);
            out.push((FiniteOutcome::Split(j), (t.ln_w(l) + t.ln_w(r) - lw).exp()));
        }
        if q == 2 {
            out.push((FiniteOutcome::Close, (-lw).exp()));
        }
        out
    }

    /// Probabilities of every outcome for the infinite hole of perimeter `q`.
    pub fn infinite(&self, q: usize) -> Vec<(InfiniteOutcome, f64)> {
        let t = &self.table;
        let lc = t.ln_c(q);
        let mut out = Vec::with_capacity(2 * q + 1);
        out.push((InfiniteOutcome::NewVertex, (self.params().lambda.ln() + t.ln_c(q + 1) - lc).exp()));
        for j in 0..q {
            let (l, r) = split_sizes(j, q);
            out.push((
                InfiniteOutcome::Split { j, left_infinite: true },
                (t.ln_c(l) + t.ln_w(r) - lc).exp(),
            ));
            out.push((
                InfiniteOutcome::Split { j, left_infinite: false },
                (t.ln_w(l) + t.ln_c(r) - lc).exp(),
            ));
        }
        out
    }
}

/// Draws from a finite list of weighted outcomes, normalising by the computed total.
pub fn draw<T: Copy>(outcomes: &[(T, f64)], rng: &mut SamplerRng) -> T {
    let total: f64 = outcomes.iter().map(|o| o.1).sum();
    let mut u = uniform(rng) * total;
    for &(o, p) in outcomes {
        if u < p {
            return o;
        }
        u -= p;
    }
    outcomes.last().expect("nonempty outcome list").0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::LAMBDA_C;

    fn grid() -> Vec<LambdaParams> {
        [LAMBDA_C, LAMBDA_C / 2.0, LAMBDA_C / 10.0]
            .iter()
            .map(|&l| LambdaParams::from_lambda(l).unwrap())
            .collect()
    }

    #[test]
    fn hole_laws_are_normalised() {
        for pa in grid() {
            let laws = HoleLaws::new(pa);
            for q in 1..=20 {
                let f: f64 = laws.finite(q).iter().map(|o| o.1).sum();
                let i: f64 = laws.infinite(q).iter().map(|o| o.1).sum();
                assert!((f - 1.0).abs() < 1e-12, "finite q = {q}: {f}");
                assert!((i - 1.0).abs() < 1e-12, "infinite q = {q}: {i}");
            }
        }
    }

    #[test]
    fn half_plane_law_is_normalised() {
        for pa in grid() {
            for v in [HalfPlaneVariant::Hyperbolic, HalfPlaneVariant::Subcritical] {
                let law = HalfPlaneLaw::new(pa, v);
                let m = law.total_mass();
                assert!((m - 1.0).abs() < 1e-9, "{v:?} λ = {}: {m}", pa.lambda);
            }
        }
    }

    #[test]
    fn critical_case_values() {
        let law = HalfPlaneLaw::new(LambdaParams::critical(), HalfPlaneVariant::Hyperbolic);
        let p1 = law.probability(HalfPlaneCase::NewVertex);
        assert!((p1 - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let p0 = law.probability(HalfPlaneCase::Left(0));
        assert!((p0 - (0.5 - 3f64.sqrt() / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn tail_draws_exceed_table() {
        let pa = LambdaParams::from_lambda(LAMBDA_C / 2.0).unwrap();
        let law = HalfPlaneLaw::with_beta(pa, pa.beta_sub, 64);
        assert!(law.tail_mass() > 0.0);
        let m = law.cum[64];
        assert!(law.swallow_size(m + 0.5 * law.tail_mass()) > 64);
    }
}
