//! Peeling explorations of a fixed triangulation, driven by a peeling
//! algorithm, and their reconstruction from the peeling diagram.
//!
//! The exploration is carried by an [`Explorer`]; a mirror records which
//! half-edge of the target triangulation every explorer half-edge stands for.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::diagram::{Decoded, EdgeLabel, PeelingDiagram, StepType};
use super::events::{region, Region, StepEvent};
use super::PeelError;
use crate::explorer::{Explorer, PeelStep, Slot, Third};
use crate::tri::{FaceRole, TriangulationWithHoles};

const NONE: usize = usize::MAX;

/// Everything a peeling algorithm may look at: the explored region and the
/// diagram recorded so far.
pub struct AlgoView<'a> {
    pub explorer: &'a Explorer,
    pub diagram: &'a PeelingDiagram,
    /// Diagram vertex of every live hole.
    pub hole_vertex: &'a BTreeMap<usize, usize>,
    pub step: usize,
}

/// A rule choosing the next hole side to peel.
pub trait PeelingAlgorithm {
    fn choose(&self, view: &AlgoView) -> Option<usize>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Algorithm {
    /// Peel next to a hole vertex closest to the root vertex.
    Metric,
    /// Peel on the hole with the leftmost diagram path.
    Left,
    /// A side chosen uniformly from a hash of the seed and the step number.
    Random { seed: u64 },
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn all_sides(ex: &Explorer) -> Vec<usize> {
    ex.live_holes().into_iter().flat_map(|h| ex.hole(h).unwrap().to_vec()).collect()
}

/// Smallest distance from the root vertex to a hole vertex.
pub fn frontier_distance(ex: &Explorer) -> Option<usize> {
    let dist = ex.vertex_distances();
    all_sides(ex).iter().filter_map(|&s| dist[ex.origin(s)]).min()
}

impl PeelingAlgorithm for Algorithm {
    fn choose(&self, view: &AlgoView) -> Option<usize> {
        let ex = view.explorer;
        match *self {
            Algorithm::Metric => {
                // holes by id, sides in list order: the first side whose left
                // vertex realises the frontier distance
                let dist = ex.vertex_distances();
                all_sides(ex).into_iter().min_by_key(|&s| dist[ex.head(s)].unwrap_or(usize::MAX))
            }
            Algorithm::Left => {
                let keys = view.diagram.left_keys();
                let h = ex
                    .live_holes()
                    .into_iter()
                    .min_by(|&a, &b| {
                        let (ka, kb) = (&keys[view.hole_vertex[&a]], &keys[view.hole_vertex[&b]]);
                        ka.cmp(kb).then(a.cmp(&b))
                    })?;
                ex.hole(h).map(|l| l[0])
            }
            Algorithm::Random { seed } => {
                let sides = all_sides(ex);
                if sides.is_empty() {
                    return None;
                }
                let r = splitmix(seed ^ splitmix(view.step as u64));
                Some(sides[(r % sides.len() as u64) as usize])
            }
        }
    }
}

/// How the peeled triangle (or the empty 2-gon) meets the explored region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Close,
    New,
    Boundary { j: usize, perimeter: usize, offset: usize },
    Split(usize),
    Merge { hole: usize, index: usize },
}

/// Index of the reference vertex of a hole: the first side, in list order,
/// whose origin is closest to the root vertex.
fn merge_reference(ex: &Explorer, hole: usize) -> usize {
    let dist = ex.vertex_distances();
    let l = ex.hole(hole).unwrap();
    (0..l.len()).min_by_key(|&i| dist[ex.origin(l[i])].unwrap_or(usize::MAX)).unwrap()
}

/// Explorer plus diagram bookkeeping.
pub struct PeelState {
    pub explorer: Explorer,
    pub diagram: PeelingDiagram,
    pub hole_vertex: BTreeMap<usize, usize>,
    pub steps: usize,
}

struct Performed {
    step: StepType,
    peel: Option<PeelStep>,
}

impl PeelState {
    pub fn new(root_perimeter: usize) -> Self {
        let (explorer, h) = Explorer::polygon(root_perimeter, 0);
        let mut hole_vertex = BTreeMap::new();
        hole_vertex.insert(h, 0);
        PeelState { explorer, diagram: PeelingDiagram::new(root_perimeter), hole_vertex, steps: 0 }
    }

    fn view(&self) -> AlgoView<'_> {
        AlgoView {
            explorer: &self.explorer,
            diagram: &self.diagram,
            hole_vertex: &self.hole_vertex,
            step: self.steps,
        }
    }

    /// Applies `action` at side `index` of `hole`; with `children` the new
    /// holes are attached to existing diagram vertices, otherwise new
    /// vertices are recorded.
    fn perform(
        &mut self,
        hole: usize,
        index: usize,
        action: Action,
        children: Option<&[usize]>,
    ) -> Result<Performed, PeelError> {
        let ex = &mut self.explorer;
        let v = self.hole_vertex.remove(&hole).ok_or_else(|| PeelError::Mismatch("hole without vertex".into()))?;
        let q = ex.hole_len(hole);
        let d = &mut self.diagram;
        let attach = |d: &mut PeelingDiagram, k: usize, label: usize| -> usize {
            match children {
                Some(c) => c[k],
                None => d.add_vertex(label),
            }
        };
        self.steps += 1;
        let out = match action {
            Action::Close => {
                if q != 2 {
                    return Err(PeelError::Mismatch(format!("closing a {q}-gon")));
                }
                ex.close_two_gon(hole);
                let c = attach(d, 0, 0);
                if children.is_none() {
                    d.add_edge(v, c, EdgeLabel::Plain);
                }
                Performed { step: StepType::I, peel: None }
            }
            Action::New => {
                let st = ex.peel(hole, index, Third::New);
                let c = attach(d, 0, q + 1);
                if children.is_none() {
                    d.add_edge(v, c, EdgeLabel::Plain);
                }
                self.hole_vertex.insert(st.holes[0], c);
                Performed { step: StepType::II, peel: Some(st) }
            }
            Action::Boundary { j, perimeter, offset } => {
                if ex.boundary_labels().contains(&j) {
                    return Err(PeelError::InconsistentDiagram(format!("boundary {j} revealed twice")));
                }
                let st = ex.peel(hole, index, Third::NewBoundary { label: j, perimeter, offset });
                let c = attach(d, 0, q + perimeter + 1);
                if children.is_none() {
                    d.add_edge(v, c, EdgeLabel::Boundary { j, b: offset });
                }
                self.hole_vertex.insert(st.holes[0], c);
                Performed { step: StepType::III { j, b: offset }, peel: Some(st) }
            }
            Action::Split(j) => {
                let st = ex.peel(hole, index, Third::SameHole(j));
                let (hl, hr) = (st.holes[0], st.holes[1]);
                let (a, b) = (ex.hole_len(hl), ex.hole_len(hr));
                let cl = attach(d, 0, a);
                let cr = attach(d, 1, b);
                if children.is_none() {
                    d.add_edge(v, cl, EdgeLabel::Left);
                    d.add_edge(v, cr, EdgeLabel::Right);
                }
                self.hole_vertex.insert(hl, cl);
                self.hole_vertex.insert(hr, cr);
                Performed { step: StepType::IV { a, b }, peel: Some(st) }
            }
            Action::Merge { hole: h2, index: i2 } => {
                let lj = ex.hole_len(h2);
                let r = merge_reference(ex, h2);
                let b = (r + lj - i2) % lj;
                let vj = self
                    .hole_vertex
                    .remove(&h2)
                    .ok_or_else(|| PeelError::Mismatch("hole without vertex".into()))?;
                let st = ex.peel(hole, index, Third::OtherHole { hole: h2, index: i2 });
                let c = attach(d, 0, q + lj + 1);
                if children.is_none() {
                    d.add_edge(v, c, EdgeLabel::Merge { b });
                    d.add_edge(vj, c, EdgeLabel::Partner);
                }
                self.hole_vertex.insert(st.holes[0], c);
                Performed { step: StepType::V { b }, peel: Some(st) }
            }
        };
        Ok(out)
    }

    /// Reads the step of the hole at `side` off the diagram and applies it.
    fn follow(&mut self, side: usize) -> Result<StepType, PeelError> {
        let (hole, index) = self.explorer.locate(side).ok_or(PeelError::AlgorithmUndefined(side))?;
        let v = self.hole_vertex[&hole];
        let q = self.explorer.hole_len(hole);
        let bad = |why: String| PeelError::InconsistentDiagram(format!("vertex {v}: {why}"));
        let (action, children) = match self.diagram.decode(v)? {
            Decoded::Leaf => return Err(bad("an open hole has no recorded step".into())),
            Decoded::Passive { .. } => return Err(bad("peeled the passive hole of a merge".into())),
            Decoded::Closed { child } => (Action::Close, vec![child]),
            Decoded::NewVertex { child } => (Action::New, vec![child]),
            Decoded::Boundary { j, b, perimeter, child } => {
                (Action::Boundary { j, perimeter, offset: b }, vec![child])
            }
            Decoded::Split { left, right } => {
                let a = self.diagram.label(left);
                if a > q {
                    return Err(bad(format!("split of a {q}-gon into a {a}-gon")));
                }
                let j = if a == q { 0 } else { a };
                (Action::Split(j), vec![left, right])
            }
            Decoded::Merge { b, child, partner } => {
                let h2 = self
                    .hole_vertex
                    .iter()
                    .find(|&(_, &x)| x == partner)
                    .map(|(&h, _)| h)
                    .ok_or_else(|| bad("merge partner is not an open hole".into()))?;
                let lj = self.explorer.hole_len(h2);
                if self.diagram.label(partner) != lj {
                    return Err(bad("partner label differs from its hole".into()));
                }
                let r = merge_reference(&self.explorer, h2);
                (Action::Merge { hole: h2, index: (r + lj - b) % lj }, vec![child])
            }
        };
        if self.diagram.label(v) != q {
            return Err(bad(format!("label differs from hole perimeter {q}")));
        }
        Ok(self.perform(hole, index, action, Some(&children))?.step)
    }
}

/// Correspondence between explorer half-edges and those of the target.
struct Mirror<'t> {
    t: &'t TriangulationWithHoles,
    roles: Vec<FaceRole>,
    on_boundary: Vec<Option<(usize, usize)>>,
    to_t: Vec<usize>,
    side_of: Vec<usize>,
    vert: Vec<usize>,
    revealed: Vec<bool>,
}

impl<'t> Mirror<'t> {
    fn new(t: &'t TriangulationWithHoles, ex: &Explorer) -> Self {
        let m = t.map();
        let mut on_boundary = vec![None; m.num_vertices()];
        for (j, b) in t.boundaries().iter().enumerate() {
            let mut x = b.edge;
            for k in 0..m.face_degree(b.face) {
                on_boundary[m.origin(x)] = Some((j, k));
                x = m.phi(x);
            }
        }
        let mut mirror = Mirror {
            t,
            roles: t.face_roles(),
            on_boundary,
            to_t: Vec::new(),
            side_of: vec![NONE; m.num_half_edges()],
            vert: vec![NONE; m.num_vertices()],
            revealed: vec![false; m.num_faces()],
        };
        mirror.reveal_boundary(ex, 0);
        mirror
    }

    fn grow(&mut self, ex: &Explorer) {
        self.to_t.resize(ex.num_half_edges(), NONE);
    }

    fn reveal_boundary(&mut self, ex: &Explorer, j: usize) {
        self.grow(ex);
        let m = self.t.map();
        let b = self.t.boundaries()[j];
        self.revealed[b.face] = true;
        let c0 = ex.boundary_root(j).expect("revealed boundary");
        let Slot::Face(f) = ex.slot(c0) else { unreachable!() };
        let mut x = b.edge;
        for c in ex.face_half_edges(f) {
            let d = ex.alpha(c);
            self.to_t[c] = x;
            self.to_t[d] = m.alpha(x);
            self.side_of[m.alpha(x)] = d;
            self.vert[m.origin(x)] = ex.origin(c);
            x = m.phi(x);
        }
    }

    fn reveal_triangle(&mut self, ex: &Explorer, st: &PeelStep) {
        self.grow(ex);
        let m = self.t.map();
        let u = self.to_t[st.peeled];
        self.side_of[u] = NONE;
        self.revealed[m.face(u)] = true;
        let [a2, b2] = st.new_sides;
        let (a, b) = (ex.alpha(a2), ex.alpha(b2));
        let (ta, tb) = (m.phi(u), m.phi(m.phi(u)));
        self.to_t[a] = ta;
        self.to_t[b] = tb;
        self.to_t[a2] = m.alpha(ta);
        self.to_t[b2] = m.alpha(tb);
        self.side_of[m.alpha(ta)] = a2;
        self.side_of[m.alpha(tb)] = b2;
        self.vert[m.origin(tb)] = st.third;
    }

    fn close(&mut self, sides: &[usize]) {
        for &s in sides {
            self.side_of[self.to_t[s]] = NONE;
        }
    }

    /// What lies behind side `index` of `hole` in the target.
    fn classify(&self, ex: &Explorer, hole: usize, index: usize) -> Result<Action, PeelError> {
        let m = self.t.map();
        let l = ex.hole(hole).unwrap();
        let s = l[index];
        let u = self.to_t[s];
        if l.len() == 2 && m.alpha(u) == self.to_t[l[1 - index]] {
            return Ok(Action::Close);
        }
        let f = m.face(u);
        if self.revealed[f] || !matches!(self.roles[f], FaceRole::Internal) {
            return Err(PeelError::Mismatch(format!("side {s} is not followed by a triangle")));
        }
        let w = m.phi(m.phi(u));
        let z = m.origin(w);
        if self.vert[z] == NONE {
            return Ok(match self.on_boundary[z] {
                Some((j, offset)) => {
                    Action::Boundary { j, perimeter: m.face_degree(self.t.boundaries()[j].face), offset }
                }
                None => Action::New,
            });
        }
        let mut x = w;
        for _ in 0..m.degree(z) {
            let side = self.side_of[x];
            if side != NONE {
                let (h2, i2) = ex.locate(side).ok_or_else(|| PeelError::Mismatch("stale side".into()))?;
                if ex.origin(side) != self.vert[z] {
                    return Err(PeelError::Mismatch("vertex correspondence broken".into()));
                }
                return Ok(if h2 == hole {
                    Action::Split((i2 + l.len() - index) % l.len())
                } else {
                    Action::Merge { hole: h2, index: i2 }
                });
            }
            x = m.sigma(x);
        }
        Err(PeelError::Mismatch(format!("no hole corner at vertex {z}")))
    }

    /// Region of the target behind a hole.
    fn region(&self, ex: &Explorer, hole: usize) -> Region {
        region(self.t, &self.roles, &self.revealed, &self.to_t, &self.side_of, ex, hole)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub k: usize,
    pub hole_perimeter: usize,
    pub step: StepType,
    /// Frontier distance before the step.
    pub sigma: usize,
    /// Holes and genus of the explored region before the step.
    pub holes_before: usize,
    pub genus_before: usize,
    /// Triangles glued back by a filled-in exploration after the step.
    pub filled: usize,
    pub event: Option<StepEvent>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExplorationTrace {
    pub steps: Vec<TraceStep>,
}

impl ExplorationTrace {
    pub fn sigma(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.sigma).collect()
    }
}

#[derive(Clone, Debug)]
pub struct PeelResult {
    pub diagram: PeelingDiagram,
    pub trace: ExplorationTrace,
    /// The explored region at the end (the whole of `t` when complete).
    pub explored: TriangulationWithHoles,
}

fn drive(
    t: &TriangulationWithHoles,
    alg: &dyn PeelingAlgorithm,
    filled: bool,
    max_steps: Option<usize>,
) -> Result<PeelResult, PeelError> {
    let Some(root_boundary) = t.boundaries().first() else { return Err(PeelError::NoBoundary) };
    if t.boundaries()[0].edge != t.map().root() {
        return Err(PeelError::Domain("the root must be the distinguished edge of the first boundary".into()));
    }
    let p1 = t.map().face_degree(root_boundary.face);
    let mut st = PeelState::new(p1);
    let mut mirror = Mirror::new(t, &st.explorer);
    let mut trace = ExplorationTrace::default();
    let mut genus = 0;
    while st.explorer.num_live_holes() > 0 && max_steps.is_none_or(|m| trace.steps.len() < m) {
        let side = alg.choose(&st.view()).ok_or(PeelError::AlgorithmUndefined(NONE))?;
        let (hole, index) = st.explorer.locate(side).ok_or(PeelError::AlgorithmUndefined(side))?;
        let sigma = frontier_distance(&st.explorer).unwrap_or(0);
        let holes_before = st.explorer.num_live_holes();
        let q = st.explorer.hole_len(hole);
        let action = mirror.classify(&st.explorer, hole, index)?;
        let sides = st.explorer.hole(hole).unwrap().to_vec();
        let done = st.perform(hole, index, action, None)?;
        apply_mirror(&mut mirror, &st.explorer, action, &done, &sides);
        let event = filled.then(|| step_event(&mirror, &st.explorer, action, &done));
        let mut filled_count = 0;
        if matches!(done.step, StepType::V { .. }) {
            genus += 1;
        }
        if filled {
            filled_count = fill_planar(&mut st, &mut mirror)?;
        }
        trace.steps.push(TraceStep {
            k: trace.steps.len(),
            hole_perimeter: q,
            step: done.step,
            sigma,
            holes_before,
            genus_before: genus - usize::from(matches!(done.step, StepType::V { .. })),
            filled: filled_count,
            event,
        });
    }
    let explored = st.explorer.export().tri;
    Ok(PeelResult { diagram: st.diagram, trace, explored })
}

fn apply_mirror(mirror: &mut Mirror, ex: &Explorer, action: Action, done: &Performed, sides: &[usize]) {
    if let Action::Boundary { j, .. } = action {
        mirror.reveal_boundary(ex, j);
    }
    match &done.peel {
        Some(p) => mirror.reveal_triangle(ex, p),
        None => mirror.close(sides),
    }
}

fn step_event(mirror: &Mirror, ex: &Explorer, action: Action, done: &Performed) -> StepEvent {
    match action {
        Action::Close => StepEvent::Close,
        Action::New => StepEvent::Interior,
        Action::Boundary { .. } | Action::Merge { .. } => StepEvent::OtherBoundary,
        Action::Split(_) => {
            let holes = &done.peel.as_ref().unwrap().holes;
            let (rl, rr) = (mirror.region(ex, holes[0]), mirror.region(ex, holes[1]));
            let joined = !rl.empty && !rr.empty && rl.touches.contains(&holes[1]);
            StepEvent::Split {
                left: ex.hole_len(holes[0]),
                right: ex.hole_len(holes[1]),
                separating: !joined,
                left_fill: rl.planar_fill(holes[0], ex.hole_len(holes[0])),
                right_fill: rr.planar_fill(holes[1], ex.hole_len(holes[1])),
            }
        }
    }
}

/// Glues back every hole whose region is a planar triangulation of that hole
/// alone; returns the number of triangles added.
fn fill_planar(st: &mut PeelState, mirror: &mut Mirror) -> Result<usize, PeelError> {
    let mut added = 0;
    for h in st.explorer.live_holes() {
        let q = st.explorer.hole_len(h);
        if mirror.region(&st.explorer, h).planar_fill(h, q).is_none() {
            continue;
        }
        let mut todo = vec![h];
        while let Some(h) = todo.pop() {
            let action = mirror.classify(&st.explorer, h, 0)?;
            let sides = st.explorer.hole(h).unwrap().to_vec();
            let done = st.perform(h, 0, action, None)?;
            apply_mirror(mirror, &st.explorer, action, &done, &sides);
            if let Some(p) = &done.peel {
                added += 1;
                todo.extend(&p.holes);
            }
        }
    }
    Ok(added)
}

/// Explores `t` completely with `alg`, recording the diagram and the trace.
pub fn peel_explore(t: &TriangulationWithHoles, alg: &dyn PeelingAlgorithm) -> Result<PeelResult, PeelError> {
    drive(t, alg, false, None)
}

/// The filled-in exploration: after every step, holes whose complement is a
/// planar triangulation of that single hole are filled in.
pub fn filled_in_explore(
    t: &TriangulationWithHoles,
    alg: &dyn PeelingAlgorithm,
    max_steps: Option<usize>,
) -> Result<PeelResult, PeelError> {
    drive(t, alg, true, max_steps)
}

/// Rebuilds the triangulation from its diagram by replaying `alg`.
pub fn rebuild(d: &PeelingDiagram, alg: &dyn PeelingAlgorithm) -> Result<TriangulationWithHoles, PeelError> {
    d.check()?;
    let p1 = d.label(d.root());
    if p1 == 0 {
        return Err(PeelError::InconsistentDiagram("root labelled 0".into()));
    }
    let mut st = PeelState::new(p1);
    st.diagram = d.clone();
    let mut used = BTreeSet::new();
    while st.explorer.num_live_holes() > 0 {
        let side = alg.choose(&st.view()).ok_or(PeelError::AlgorithmUndefined(NONE))?;
        let (hole, _) = st.explorer.locate(side).ok_or(PeelError::AlgorithmUndefined(side))?;
        used.insert(st.hole_vertex[&hole]);
        st.follow(side)?;
        if st.steps > d.num_vertices() {
            return Err(PeelError::InconsistentDiagram("more steps than vertices".into()));
        }
    }
    for v in 0..d.num_vertices() {
        let active = !matches!(d.decode(v)?, Decoded::Leaf | Decoded::Passive { .. });
        if active && !used.contains(&v) {
            return Err(PeelError::InconsistentDiagram(format!("vertex {v} never reached")));
        }
    }
    Ok(st.explorer.export().tri)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_planar_polygon, enumerate_rooted, GluingSpec};

    fn corpus() -> Vec<TriangulationWithHoles> {
        let mut v = Vec::new();
        for (p, n) in [(1, 2), (2, 2), (3, 2), (4, 2), (5, 1)] {
            v.extend(enumerate_planar_polygon(p, n).unwrap().maps);
        }
        for (t, b, g) in [(3, vec![1], 1), (4, vec![2], 1), (2, vec![1, 1], 0), (3, vec![2, 1], 0)] {
            v.extend(enumerate_rooted(&GluingSpec::with_boundaries(t, b, Some(g))).unwrap().maps);
        }
        v
    }

    #[test]
    fn round_trip_for_each_algorithm() {
        let algs = [Algorithm::Metric, Algorithm::Left, Algorithm::Random { seed: 7 }];
        let maps = corpus();
        assert!(maps.len() > 50);
        for t in &maps {
            for alg in &algs {
                let r = peel_explore(t, alg).unwrap();
                assert_eq!(r.explored.code(), t.code(), "{alg:?} does not explore everything");
                let back = rebuild(&r.diagram, alg).unwrap();
                assert_eq!(back.code(), t.code(), "{alg:?} rebuild differs");
            }
        }
    }

    #[test]
    fn step_counts_match_the_triangulation() {
        for t in corpus() {
            let d = peel_explore(&t, &Algorithm::Left).unwrap().diagram;
            let c = d.type_counts();
            assert_eq!(c.ii, t.num_internal_vertices());
            assert_eq!(c.v, t.genus());
            assert_eq!(c.iii + 1, t.boundaries().len());
            assert_eq!(d.is_tree(), t.genus() == 0);
        }
    }

    #[test]
    fn tampered_split_is_rejected() {
        let t = enumerate_planar_polygon(4, 2).unwrap().maps.into_iter().next().unwrap();
        let mut d = peel_explore(&t, &Algorithm::Left).unwrap().diagram;
        let e = d.edges.iter().find(|e| e.label == EdgeLabel::Left).copied();
        if let Some(e) = e {
            d.labels[e.to] += 1;
            assert!(matches!(rebuild(&d, &Algorithm::Left), Err(PeelError::InconsistentDiagram(_))));
        }
    }

    #[test]
    fn metric_frontier_distance_never_decreases() {
        for t in corpus() {
            for r in [peel_explore(&t, &Algorithm::Metric).unwrap(), filled_in_explore(&t, &Algorithm::Metric, None).unwrap()] {
                let s = r.trace.sigma();
                assert!(s.windows(2).all(|w| w[0] <= w[1]), "{s:?}");
            }
        }
    }
}
