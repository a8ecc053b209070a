//! Boundary events of a peeling step and the GOOD/BAD classification of
//! filled-in exploration steps.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::explore::TraceStep;
use super::PeelError;
use crate::explorer::Explorer;
use crate::tri::{FaceRole, TriangulationWithHoles};

const NONE: usize = usize::MAX;

/// Unexplored part of the target behind a hole.
#[derive(Clone, Debug, Default)]
pub struct Region {
    /// The hole is an empty 2-gon.
    pub empty: bool,
    pub triangles: usize,
    pub vertices: usize,
    /// Holes whose sides bound the region.
    pub touches: BTreeSet<usize>,
    /// The region contains an unrevealed boundary.
    pub has_boundary: bool,
}

impl Region {
    /// The size index `n` of the region as a triangulation of the `q`-gon
    /// `hole`, when it is planar and bounded by that hole alone.
    pub fn planar_fill(&self, hole: usize, q: usize) -> Option<i64> {
        if self.empty {
            return Some(0);
        }
        if self.has_boundary || self.touches.len() != 1 || !self.touches.contains(&hole) {
            return None;
        }
        let (t, v) = (self.triangles as i64, self.vertices as i64);
        let e2 = 3 * t + q as i64;
        if e2 % 2 != 0 {
            return None;
        }
        let chi = v - e2 / 2 + t + 1;
        (chi == 2).then(|| (t + q as i64 - 2) / 2)
    }
}

pub(crate) fn region(
    t: &TriangulationWithHoles,
    roles: &[FaceRole],
    revealed: &[bool],
    to_t: &[usize],
    side_of: &[usize],
    ex: &Explorer,
    hole: usize,
) -> Region {
    let m = t.map();
    let l = ex.hole(hole).unwrap();
    let mut r = Region::default();
    if l.len() == 2 && m.alpha(to_t[l[0]]) == to_t[l[1]] {
        r.empty = true;
        return r;
    }
    let mut seen = vec![false; m.num_faces()];
    let mut verts = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &s in l {
        let u = to_t[s];
        verts.insert(m.origin(u));
        let f = m.face(u);
        if !revealed[f] && !seen[f] {
            seen[f] = true;
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        match roles[f] {
            FaceRole::Internal => r.triangles += 1,
            _ => r.has_boundary = true,
        }
        for h in m.face_half_edges(f) {
            verts.insert(m.origin(h));
            if side_of[h] != NONE {
                if let Some((h2, _)) = ex.locate(side_of[h]) {
                    r.touches.insert(h2);
                }
            }
            let g = m.face(m.alpha(h));
            if !revealed[g] && !seen[g] {
                seen[g] = true;
                queue.push_back(g);
            }
        }
    }
    r.vertices = verts.len();
    r
}

/// What a filled-in step revealed, seen from the peeled hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum StepEvent {
    /// The third vertex is new.
    Interior,
    /// The third vertex lies on another hole or an unrevealed boundary.
    OtherBoundary,
    /// The third vertex lies on the peeled hole, which splits into holes of
    /// perimeters `left` and `right`. `*_fill` is the size index of the part
    /// behind the new hole when it is a planar one-hole triangulation.
    Split { left: usize, right: usize, separating: bool, left_fill: Option<i64>, right_fill: Option<i64> },
    Close,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Good,
    /// The first BAD clause met, numbered 1 to 4.
    Bad { clause: u8 },
}

impl Verdict {
    pub fn is_bad(self) -> bool {
        matches!(self, Verdict::Bad { .. })
    }
}

/// GOOD/BAD with threshold perimeter `big_a` and size threshold `small_a`.
pub fn classify_event(event: &StepEvent, big_a: usize, small_a: i64) -> Verdict {
    match *event {
        StepEvent::Interior | StepEvent::Close => Verdict::Good,
        StepEvent::OtherBoundary => Verdict::Bad { clause: 4 },
        StepEvent::Split { left, right, separating, left_fill, right_fill } => {
            let (kl, kr) = (left - 1, right - 1);
            if !separating {
                return Verdict::Bad { clause: if kl < big_a || kr < big_a { 1 } else { 3 } };
            }
            let small = |fill: Option<i64>| fill.is_some_and(|n| (0..=small_a).contains(&n));
            if (kl < big_a && !small(left_fill)) || (kr < big_a && !small(right_fill)) {
                return Verdict::Bad { clause: 2 };
            }
            if kl >= big_a && kr >= big_a {
                return Verdict::Bad { clause: 3 };
            }
            Verdict::Good
        }
    }
}

/// Classifies a filled-in step; the region before it must be planar with one hole.
pub fn classify_good_bad(step: &TraceStep, big_a: usize, small_a: i64) -> Result<Verdict, PeelError> {
    if step.holes_before != 1 || step.genus_before != 0 {
        return Err(PeelError::Precondition(format!(
            "step {} starts from {} holes and genus {}",
            step.k, step.holes_before, step.genus_before
        )));
    }
    let event = step
        .event
        .as_ref()
        .ok_or_else(|| PeelError::Precondition("the trace was not recorded with events".into()))?;
    Ok(classify_event(event, big_a, small_a))
}

/// Event of the triangle adjacent to a boundary half-edge `e`, with `ρ` the
/// origin of `e`. For a third vertex on the same boundary, `left` is the `k`
/// of `ℒ_k` (a new hole of perimeter `k + 1` on the left) and `right` the `k`
/// of `ℛ_k`; the two always add up to `p − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum BoundaryEvent {
    /// `e` lies on a 2-gon boundary glued to itself.
    Empty,
    Interior,
    OtherBoundary { j: usize },
    SameBoundary { left: usize, right: usize, separating: bool },
}

impl BoundaryEvent {
    /// The largest `k` with `ℋ_k`: both new holes have perimeter at least `k`.
    pub fn h_k(&self) -> Option<usize> {
        match *self {
            BoundaryEvent::SameBoundary { left, right, .. } => Some(left.min(right) + 1),
            _ => None,
        }
    }
}

pub fn classify_boundary_event(t: &TriangulationWithHoles, e: usize) -> Result<BoundaryEvent, PeelError> {
    let m = t.map();
    if e >= m.num_half_edges() {
        return Err(PeelError::Domain(format!("half-edge {e} out of range")));
    }
    let roles = t.face_roles();
    let FaceRole::Boundary(i) = roles[m.face(e)] else {
        return Err(PeelError::Domain(format!("half-edge {e} is not on a boundary")));
    };
    let u = m.alpha(e);
    let t0 = m.face(u);
    if !matches!(roles[t0], FaceRole::Internal) {
        return Ok(BoundaryEvent::Empty);
    }
    let (a, b) = (m.phi(u), m.phi(m.phi(u)));
    let z = m.origin(b);
    let mut pos = None;
    for (j, bd) in t.boundaries().iter().enumerate() {
        let mut x = bd.edge;
        let p = m.face_degree(bd.face);
        for k in 0..p {
            if m.origin(x) == z {
                pos = Some((j, k, p));
            }
            x = m.phi(x);
        }
    }
    let Some((j, _, p)) = pos else { return Ok(BoundaryEvent::Interior) };
    if j != i {
        return Ok(BoundaryEvent::OtherBoundary { j });
    }
    // position of z counted from ρ along e
    let mut x = e;
    let mut mz = 0;
    for k in 0..p {
        if m.origin(x) == z {
            mz = k;
        }
        x = m.phi(x);
    }
    let left = (p - mz) % p;
    let right = p - 1 - left;
    // both sides non-empty and joined away from t0 and the boundary
    let bf = m.face(e);
    let seed = |h: usize| {
        let f = m.face(m.alpha(h));
        (f != bf && f != t0).then_some(f)
    };
    let separating = match (seed(a), seed(b)) {
        (Some(fa), Some(fb)) => {
            let mut seen = vec![false; m.num_faces()];
            seen[fa] = true;
            let mut queue = VecDeque::from([fa]);
            while let Some(f) = queue.pop_front() {
                for h in m.face_half_edges(f) {
                    let g = m.face(m.alpha(h));
                    if g != bf && g != t0 && !seen[g] {
                        seen[g] = true;
                        queue.push_back(g);
                    }
                }
            }
            !seen[fb]
        }
        _ => true,
    };
    Ok(BoundaryEvent::SameBoundary { left, right, separating })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_planar_polygon, enumerate_rooted, GluingSpec};

    #[test]
    fn single_triangle_events() {
        let t = &enumerate_planar_polygon(3, 0).unwrap().maps[0];
        let e = t.boundaries()[0].edge;
        // the only triangle has its third vertex on the boundary; both new holes are empty 2-gons
        assert_eq!(
            classify_boundary_event(t, e).unwrap(),
            BoundaryEvent::SameBoundary { left: 1, right: 1, separating: true }
        );
    }

    #[test]
    fn planar_events_always_separate() {
        for (p, n) in [(1, 2), (3, 2), (4, 2), (5, 2)] {
            for t in enumerate_planar_polygon(p, n).unwrap().maps {
                let ev = classify_boundary_event(&t, t.boundaries()[0].edge).unwrap();
                if let BoundaryEvent::SameBoundary { left, right, separating } = ev {
                    assert!(separating);
                    assert_eq!(left + right, p - 1);
                }
            }
        }
    }

    #[test]
    fn handles_give_non_separating_events() {
        let maps = enumerate_rooted(&GluingSpec::with_boundaries(3, vec![1], Some(1))).unwrap().maps;
        let nsep = maps
            .iter()
            .filter(|t| {
                matches!(
                    classify_boundary_event(t, t.boundaries()[0].edge).unwrap(),
                    BoundaryEvent::SameBoundary { separating: false, .. }
                )
            })
            .count();
        assert!(nsep > 0);
    }

    #[test]
    fn verdicts() {
        let sep = |left, right, lf, rf| StepEvent::Split {
            left,
            right,
            separating: true,
            left_fill: lf,
            right_fill: rf,
        };
        // a loop enclosing a single triangle; the other side is large
        assert_eq!(classify_event(&sep(1, 9, Some(0), None), 1, 0), Verdict::Good);
        assert_eq!(classify_event(&StepEvent::Interior, 3, 0), Verdict::Good);
        assert_eq!(classify_event(&StepEvent::OtherBoundary, 3, 0), Verdict::Bad { clause: 4 });
        let nsep = StepEvent::Split { left: 4, right: 4, separating: false, left_fill: None, right_fill: None };
        assert_eq!(classify_event(&nsep, 3, 0), Verdict::Bad { clause: 3 });
        assert_eq!(classify_event(&nsep, 5, 0), Verdict::Bad { clause: 1 });
        assert_eq!(classify_event(&sep(2, 9, Some(3), None), 3, 2), Verdict::Bad { clause: 2 });
        assert_eq!(classify_event(&sep(5, 6, None, None), 3, 2), Verdict::Bad { clause: 3 });
    }
}
