//! Exact samplers driven by peeling.
//!
//! A [`PeelFrontier`] keeps an explored region whose holes are either the
//! single infinite hole of the model or finite holes awaiting an independent
//! Boltzmann fill. Finite holes are only peeled when an exploration needs
//! them, each with its own random stream, so laziness never changes a sample.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::laws::{
    draw, FiniteOutcome, HalfPlaneCase, HalfPlaneLaw, HalfPlaneVariant, HoleLaws,
    InfiniteOutcome,
};
use super::rng::{split, SamplerRng};
use crate::ball::{ball, EdgeSubmap};
use crate::enumeration::LambdaParams;
use crate::explorer::{Explorer, Export, Third};
use crate::tri::TriangulationWithHoles;

pub const DEFAULT_BUDGET: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("exploration exceeded {budget} half-edges")]
    Budget { budget: usize },
    #[error("one-step law for perimeter {q} has mass {mass}")]
    Normalization { q: usize, mass: f64 },
    #[error("invalid sampler input: {0}")]
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    HalfPlane(HalfPlaneVariant),
    /// `𝕋_λ`, obtained from `𝕋_λ^{(1)}` by removing the root loop.
    Plane,
    /// `𝕋_λ^{(p)}`.
    Psht(usize),
    /// Boltzmann triangulation of the `p`-gon.
    Boltzmann(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    HalfPlane(HalfPlaneCase),
    Infinite(InfiniteOutcome),
    Finite(FiniteOutcome),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    /// Perimeter of the peeled hole (the window length for half-planes).
    pub perimeter: usize,
    pub kind: StepKind,
}

/// Laws shared by every sample of one model; building it checks normalisation.
#[derive(Clone, Debug)]
pub struct SamplerContext {
    pub params: LambdaParams,
    pub model: Model,
    pub laws: HoleLaws,
    pub half_plane: Option<HalfPlaneLaw>,
    pub budget: usize,
}

impl SamplerContext {
    pub fn new(params: LambdaParams, model: Model) -> Result<Self, SamplerError> {
        match model {
            Model::Psht(0) | Model::Boltzmann(0) => {
                return Err(SamplerError::Domain("perimeter must be positive".into()))
            }
            _ => {}
        }
        let laws = HoleLaws::new(params);
        let half_plane = match model {
            Model::HalfPlane(v) => {
                let law = HalfPlaneLaw::new(params, v);
                let mass = law.total_mass();
                if (mass - 1.0).abs() > 1e-9 {
                    return Err(SamplerError::Normalization { q: 0, mass });
                }
                Some(law)
            }
            _ => None,
        };
        let ctx = SamplerContext { params, model, laws, half_plane, budget: DEFAULT_BUDGET };
        for q in 1..=20 {
            let f: f64 = ctx.laws.finite(q).iter().map(|o| o.1).sum();
            let i: f64 = ctx.laws.infinite(q).iter().map(|o| o.1).sum();
            for mass in [f, i] {
                if (mass - 1.0).abs() > 1e-9 {
                    return Err(SamplerError::Normalization { q, mass });
                }
            }
        }
        Ok(ctx)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn frontier(&self, rng: SamplerRng) -> Result<PeelFrontier<'_>, SamplerError> {
        PeelFrontier::new(self, rng)
    }
}

pub struct PeelFrontier<'a> {
    ctx: &'a SamplerContext,
    ex: Explorer,
    infinite: Option<usize>,
    rng: SamplerRng,
    hole_rng: BTreeMap<usize, SamplerRng>,
    pending: Vec<usize>,
    new_vertices: usize,
    trace: Vec<StepRecord>,
}

impl<'a> PeelFrontier<'a> {
    fn new(ctx: &'a SamplerContext, rng: SamplerRng) -> Result<Self, SamplerError> {
        let (ex, h) = match ctx.model {
            Model::HalfPlane(_) => Explorer::half_plane(),
            Model::Plane => Explorer::polygon(1, 0),
            Model::Psht(p) | Model::Boltzmann(p) => Explorer::polygon(p, 0),
        };
        let mut f = PeelFrontier {
            ctx,
            ex,
            infinite: None,
            rng,
            hole_rng: BTreeMap::new(),
            pending: Vec::new(),
            new_vertices: 0,
            trace: Vec::new(),
        };
        match ctx.model {
            Model::Boltzmann(_) => f.add_finite(h),
            _ => f.infinite = Some(h),
        }
        if ctx.model == Model::Plane {
            let side = f.ex.hole(h).expect("root hole")[0];
            f.peel_side(side)?;
            f.ex.remove_root_loop().expect("root loop was peeled");
        }
        Ok(f)
    }

    pub fn explorer(&self) -> &Explorer {
        &self.ex
    }

    pub fn trace(&self) -> &[StepRecord] {
        &self.trace
    }

    /// Vertices discovered by new-vertex steps.
    pub fn new_vertices(&self) -> usize {
        self.new_vertices
    }

    pub fn infinite_hole(&self) -> Option<usize> {
        self.infinite
    }

    fn add_finite(&mut self, hole: usize) {
        let r = split(&mut self.rng);
        self.hole_rng.insert(hole, r);
        self.pending.push(hole);
    }

    fn check_budget(&self) -> Result<(), SamplerError> {
        if self.ex.num_half_edges() > self.ctx.budget {
            return Err(SamplerError::Budget { budget: self.ctx.budget });
        }
        Ok(())
    }

    /// Peels one hole side with the law of its hole.
    pub fn peel_side(&mut self, side: usize) -> Result<StepRecord, SamplerError> {
        let (hole, _) = self
            .ex
            .locate(side)
            .ok_or_else(|| SamplerError::Domain(format!("{side} is not a hole side")))?;
        if self.ex.is_virtual(side) {
            return Err(SamplerError::Domain("virtual sides cannot be peeled".into()));
        }
        let rec = if Some(hole) == self.infinite {
            match self.ctx.model {
                Model::HalfPlane(_) => self.half_plane_step(hole, side)?,
                _ => self.infinite_step(hole, side),
            }
        } else {
            self.finite_step(hole, side)
        };
        self.trace.push(rec);
        self.check_budget()?;
        Ok(rec)
    }

    fn index_of(&self, side: usize) -> usize {
        self.ex.locate(side).expect("hole side").1
    }

    /// Errors before materialising a swallowed stretch that would exceed the budget.
    fn reserve(&self, edges: usize) -> Result<(), SamplerError> {
        if self.ex.num_half_edges().saturating_add(edges.saturating_mul(2)) > self.ctx.budget {
            return Err(SamplerError::Budget { budget: self.ctx.budget });
        }
        Ok(())
    }

    fn half_plane_step(&mut self, hole: usize, side: usize) -> Result<StepRecord, SamplerError> {
        let law = self.ctx.half_plane.as_ref().expect("half-plane law");
        let case = law.sample(&mut self.rng);
        let perimeter = self.ex.hole_len(hole);
        let vh = self.ex.virtual_hole_side().expect("half-plane explorer");
        match case {
            HalfPlaneCase::NewVertex => {
                let s = self.ex.peel(hole, self.index_of(side), Third::New);
                self.new_vertices += 1;
                self.infinite = Some(s.holes[0]);
            }
            HalfPlaneCase::Left(i) => {
                let need = i.saturating_sub(self.run_left(hole, side, vh));
                self.reserve(need)?;
                self.ex.extend_left_by(need);
                let s = self.ex.peel(hole, self.index_of(side), Third::SameHole(i + 1));
                self.infinite = Some(s.holes[1]);
                self.add_finite(s.holes[0]);
            }
            HalfPlaneCase::Right(i) => {
                let need = i.saturating_sub(self.run_right(hole, side, vh));
                self.reserve(need)?;
                self.ex.extend_right_by(need);
                let q = self.ex.hole_len(hole);
                let j = if i == 0 { 0 } else { q - i };
                let s = self.ex.peel(hole, self.index_of(side), Third::SameHole(j));
                self.infinite = Some(s.holes[0]);
                self.add_finite(s.holes[1]);
            }
        }
        Ok(StepRecord { perimeter, kind: StepKind::HalfPlane(case) })
    }

    /// Real sides following `side` before the virtual side.
    fn run_left(&self, hole: usize, side: usize, vh: usize) -> usize {
        let l = self.ex.hole(hole).unwrap();
        let i = self.index_of(side);
        (1..l.len()).take_while(|&k| l[(i + k) % l.len()] != vh).count()
    }

    fn run_right(&self, hole: usize, side: usize, vh: usize) -> usize {
        let l = self.ex.hole(hole).unwrap();
        let n = l.len();
        let i = self.index_of(side);
        (1..n).take_while(|&k| l[(i + n - k) % n] != vh).count()
    }

    fn infinite_step(&mut self, hole: usize, side: usize) -> StepRecord {
        let q = self.ex.hole_len(hole);
        let outcome = draw(&self.ctx.laws.infinite(q), &mut self.rng);
        match outcome {
            InfiniteOutcome::NewVertex => {
                let s = self.ex.peel(hole, self.index_of(side), Third::New);
                self.new_vertices += 1;
                self.infinite = Some(s.holes[0]);
            }
            InfiniteOutcome::Split { j, left_infinite } => {
                let s = self.ex.peel(hole, self.index_of(side), Third::SameHole(j));
                let (inf, fin) = if left_infinite {
                    (s.holes[0], s.holes[1])
                } else {
                    (s.holes[1], s.holes[0])
                };
                self.infinite = Some(inf);
                self.add_finite(fin);
            }
        }
        StepRecord { perimeter: q, kind: StepKind::Infinite(outcome) }
    }

    fn finite_step(&mut self, hole: usize, side: usize) -> StepRecord {
        let q = self.ex.hole_len(hole);
        let mut r = self.hole_rng.remove(&hole).expect("finite hole stream");
        let outcome = draw(&self.ctx.laws.finite(q), &mut r);
        match outcome {
            FiniteOutcome::NewVertex => {
                let s = self.ex.peel(hole, self.index_of(side), Third::New);
                self.new_vertices += 1;
                self.hole_rng.insert(s.holes[0], r);
                self.pending.push(s.holes[0]);
            }
            FiniteOutcome::Split(j) => {
                let s = self.ex.peel(hole, self.index_of(side), Third::SameHole(j));
                let (a, b) = (split(&mut r), split(&mut r));
                for (h, child) in [(s.holes[1], b), (s.holes[0], a)] {
                    self.hole_rng.insert(h, child);
                    self.pending.push(h);
                }
            }
            FiniteOutcome::Close => self.ex.close_two_gon(hole),
        }
        StepRecord { perimeter: q, kind: StepKind::Finite(outcome) }
    }

    /// Fills every finite hole; for Boltzmann models this completes the sample.
    pub fn fill_finite(&mut self) -> Result<(), SamplerError> {
        self.fill_finite_until(usize::MAX).map(|_| ())
    }

    /// As [`fill_finite`](Self::fill_finite), giving up (returning `false`)
    /// once more than `max_new` new vertices have been found.
    pub fn fill_finite_until(&mut self, max_new: usize) -> Result<bool, SamplerError> {
        while let Some(h) = self.pending.pop() {
            let Some(l) = self.ex.hole(h) else { continue };
            self.pending.push(h);
            let side = l[0];
            self.peel_side(side)?;
            if self.new_vertices > max_new {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Peels until the ball of radius `r` around the root is determined: every
    /// hole vertex is then at distance at least `r`.
    pub fn explore_ball(&mut self, r: usize) -> Result<(), SamplerError> {
        if r == 0 {
            return Ok(());
        }
        // distances only shrink when a step joins two old vertices; a new
        // vertex is one more than the nearer end of the peeled edge
        let mut dist = self.ex.vertex_distances();
        loop {
            let mut best: Option<(usize, usize)> = None;
            for id in self.ex.live_holes() {
                for &s in self.ex.hole(id).unwrap() {
                    let Some(d) = dist[self.ex.origin(s)] else { continue };
                    let better = match best {
                        None => true,
                        Some((bd, bs)) => d < bd || (d == bd && self.ex.is_virtual(bs) && !self.ex.is_virtual(s)),
                    };
                    if better {
                        best = Some((d, s));
                    }
                }
            }
            let Some((d, s)) = best else { return Ok(()) };
            if d >= r {
                return Ok(());
            }
            let extended = self.ex.is_virtual(s);
            let s = if extended { self.ex.extend_left() } else { s };
            let ends = [self.ex.origin(s), self.ex.head(s)];
            let before = self.ex.num_vertices();
            let kind = self.peel_side(s)?.kind;
            let new_vertex = matches!(
                kind,
                StepKind::HalfPlane(HalfPlaneCase::NewVertex)
                    | StepKind::Infinite(InfiniteOutcome::NewVertex)
                    | StepKind::Finite(FiniteOutcome::NewVertex)
            );
            if !extended && new_vertex && self.ex.num_vertices() == before + 1 && dist.len() == before {
                dist.push(ends.iter().filter_map(|&v| dist[v]).min().map(|d| d + 1));
            } else {
                dist = self.ex.vertex_distances();
            }
        }
    }

    pub fn export(&self) -> Export {
        self.ex.export()
    }

    /// The ball of radius `r`; call [`explore_ball`](Self::explore_ball) first.
    pub fn ball(&self, r: usize) -> EdgeSubmap {
        let x = self.ex.export();
        ball(x.tri.map(), r, Some(&x.usable))
    }

    /// Degree of the root vertex; exact once the ball of radius 1 is explored.
    pub fn root_degree(&self) -> usize {
        let x = self.ex.export();
        let m = x.tri.map();
        m.vertex_half_edges(m.origin(m.root()))
            .iter()
            .filter(|&&h| x.usable[h])
            .count()
    }
}

/// Boltzmann triangulation of the `p`-gon.
pub fn sample_boltzmann(
    ctx: &SamplerContext,
    rng: SamplerRng,
) -> Result<TriangulationWithHoles, SamplerError> {
    let Model::Boltzmann(_) = ctx.model else {
        return Err(SamplerError::Domain("context is not a Boltzmann model".into()));
    };
    let mut f = ctx.frontier(rng)?;
    f.fill_finite()?;
    Ok(f.export().tri)
}

/// A Boltzmann sample if it has at most `max_internal` internal vertices.
/// Sampling stops as soon as the bound is exceeded, so the law restricted to
/// small atoms is exact at a fraction of the cost.
pub fn sample_boltzmann_bounded(
    ctx: &SamplerContext,
    rng: SamplerRng,
    max_internal: usize,
) -> Result<Option<TriangulationWithHoles>, SamplerError> {
    let mut f = ctx.frontier(rng)?;
    if f.fill_finite_until(max_internal)? {
        Ok(Some(f.export().tri))
    } else {
        Ok(None)
    }
}

/// The ball of radius `r` around the root of one sample of the model.
pub fn sample_ball(
    ctx: &SamplerContext,
    rng: SamplerRng,
    r: usize,
) -> Result<EdgeSubmap, SamplerError> {
    let mut f = ctx.frontier(rng)?;
    f.explore_ball(r)?;
    Ok(f.ball(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::LAMBDA_C;
    use crate::samplers::rng::stream;

    fn half() -> LambdaParams {
        LambdaParams::from_lambda(LAMBDA_C / 2.0).unwrap()
    }

    #[test]
    fn boltzmann_samples_are_valid() {
        for p in 1..=4 {
            let ctx = SamplerContext::new(half(), Model::Boltzmann(p)).unwrap();
            for i in 0..200 {
                let t = sample_boltzmann(&ctx, stream(1, i)).unwrap();
                assert_eq!(t.validate(), Ok(()));
                assert_eq!(t.boundary_perimeters(), vec![p]);
                assert_eq!(t.genus(), 0);
            }
        }
    }

    #[test]
    fn explored_regions_stay_valid() {
        for model in [
            Model::HalfPlane(HalfPlaneVariant::Hyperbolic),
            Model::HalfPlane(HalfPlaneVariant::Subcritical),
            Model::Psht(3),
        ] {
            let ctx = SamplerContext::new(LambdaParams::critical(), model).unwrap();
            for i in 0..30 {
                let mut f = ctx.frontier(stream(2, i)).unwrap();
                for _ in 0..15 {
                    let x = f.export();
                    assert_eq!(x.tri.validate(), Ok(()), "{model:?}");
                    let h = f.explorer().live_holes()[0];
                    let side = *f.explorer().hole(h).unwrap().iter().find(|&&s| !f.explorer().is_virtual(s)).unwrap();
                    f.peel_side(side).unwrap();
                }
            }
        }
    }

    #[test]
    fn balls_are_deterministic() {
        let ctx = SamplerContext::new(LambdaParams::critical(), Model::Plane).unwrap();
        for i in 0..20 {
            let a = sample_ball(&ctx, stream(3, i), 2).unwrap().code();
            let b = sample_ball(&ctx, stream(3, i), 2).unwrap().code();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn radius_zero_ball_is_empty() {
        let ctx = SamplerContext::new(half(), Model::HalfPlane(HalfPlaneVariant::Hyperbolic)).unwrap();
        assert!(sample_ball(&ctx, stream(0, 0), 0).unwrap().is_empty());
    }
}
