//! Metric balls, dual balls and the two local distances.

use std::collections::{BTreeSet, VecDeque};

use num_rational::Ratio;

use crate::code::{canonical_code, RootedCode};
use crate::map::HalfEdgeMap;
use crate::tri::{FaceRole, TriangulationWithHoles};

/// A sub-collection of edges with the induced embedding.
#[derive(Clone, Debug)]
pub struct EdgeSubmap {
    /// `None` for the empty ball.
    pub map: Option<HalfEdgeMap>,
    /// Original half-edge of each local half-edge.
    pub original: Vec<usize>,
}

impl EdgeSubmap {
    pub fn empty() -> Self {
        EdgeSubmap { map: None, original: Vec::new() }
    }

    pub fn num_edges(&self) -> usize {
        self.original.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn code(&self) -> RootedCode {
        match &self.map {
            Some(m) => canonical_code(m),
            None => RootedCode(vec![0]),
        }
    }

    /// Original edge ids (smaller half-edge index) of the included edges.
    pub fn edge_set(&self, parent: &HalfEdgeMap) -> BTreeSet<usize> {
        self.original.iter().map(|&h| parent.edge_id(h)).collect()
    }
}

/// Restriction of `m` to the half-edges flagged in `keep` (closed under alpha),
/// rotating around each vertex to the next kept half-edge.
pub fn induced_submap(m: &HalfEdgeMap, keep: &[bool]) -> EdgeSubmap {
    let original: Vec<usize> = (0..m.num_half_edges()).filter(|&h| keep[h]).collect();
    if original.is_empty() || !keep[m.root()] {
        return EdgeSubmap::empty();
    }
    let mut local = vec![usize::MAX; m.num_half_edges()];
    for (i, &h) in original.iter().enumerate() {
        local[h] = i;
    }
    let mut sigma = Vec::with_capacity(original.len());
    let mut alpha = Vec::with_capacity(original.len());
    for &h in &original {
        let mut x = m.sigma(h);
        while !keep[x] {
            x = m.sigma(x);
        }
        sigma.push(local[x]);
        alpha.push(local[m.alpha(h)]);
    }
    let map = HalfEdgeMap::new(sigma, alpha, local[m.root()]).ok();
    EdgeSubmap { map, original }
}

/// Edges with an endpoint at distance at most `r − 1` from the root vertex.
/// Half-edges flagged `false` in `usable` are ignored entirely.
pub fn ball(m: &HalfEdgeMap, r: usize, usable: Option<&[bool]>) -> EdgeSubmap {
    if r == 0 {
        return EdgeSubmap::empty();
    }
    let dist = m.vertex_distances(m.origin(m.root()), usable);
    let near = |v: usize| dist[v].is_some_and(|d| d < r);
    let keep: Vec<bool> = (0..m.num_half_edges())
        .map(|h| usable.is_none_or(|u| u[h]) && (near(m.origin(h)) || near(m.head(h))))
        .collect();
    induced_submap(m, &keep)
}

fn usable_edges(m: &HalfEdgeMap, usable: Option<&[bool]>) -> usize {
    match usable {
        Some(u) => (0..m.num_half_edges()).filter(|&h| u[h]).count() / 2,
        None => m.num_edges(),
    }
}

/// `(1 + max{r : B_r agree})⁻¹`, and `0` when every ball agrees.
pub fn local_distance(a: &HalfEdgeMap, b: &HalfEdgeMap) -> Ratio<u64> {
    local_distance_masked(a, None, b, None)
}

pub fn local_distance_masked(
    a: &HalfEdgeMap,
    ua: Option<&[bool]>,
    b: &HalfEdgeMap,
    ub: Option<&[bool]>,
) -> Ratio<u64> {
    let (ea, eb) = (usable_edges(a, ua), usable_edges(b, ub));
    for r in 1.. {
        let (ba, bb) = (ball(a, r, ua), ball(b, r, ub));
        if ba.code() != bb.code() {
            return Ratio::new(1, r as u64);
        }
        if ba.num_edges() == ea && bb.num_edges() == eb {
            return Ratio::from_integer(0);
        }
    }
    unreachable!()
}

/// Dual distances between non-boundary faces, from the faces incident to the root edge.
pub fn dual_face_distances(t: &TriangulationWithHoles) -> Vec<Option<usize>> {
    let m = t.map();
    let role = t.face_roles();
    let internal = |f: usize| !matches!(role[f], FaceRole::Boundary(_));
    let mut dist = vec![None; m.num_faces()];
    let mut queue = VecDeque::new();
    for h in [m.root(), m.alpha(m.root())] {
        let f = m.face(h);
        if internal(f) && dist[f].is_none() {
            dist[f] = Some(0);
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        let d = dist[f].unwrap();
        for h in m.face_half_edges(f) {
            let g = m.face(m.alpha(h));
            if internal(g) && dist[g].is_none() {
                dist[g] = Some(d + 1);
                queue.push_back(g);
            }
        }
    }
    dist
}

/// Triangles within dual distance `r` of the root edge, the boundaries touching
/// them, and holes filling everything else. Holes of `t` count for distances
/// but are not kept: they merge into the new holes.
pub fn dual_ball(t: &TriangulationWithHoles, r: usize) -> TriangulationWithHoles {
    let m = t.map();
    let role = t.face_roles();
    let dist = dual_face_distances(t);
    let mut selected = vec![false; m.num_faces()];
    let mut touched = vec![false; m.num_vertices()];
    for f in 0..m.num_faces() {
        if matches!(role[f], FaceRole::Internal) && dist[f].is_some_and(|d| d <= r) {
            selected[f] = true;
            for h in m.face_half_edges(f) {
                touched[m.origin(h)] = true;
            }
        }
    }
    let root_faces = [m.face(m.root()), m.face(m.alpha(m.root()))];
    let mut boundary_edges = Vec::new();
    for b in t.boundaries() {
        let touches = m.face_half_edges(b.face).iter().any(|&h| touched[m.origin(h)]);
        if touches || root_faces.contains(&b.face) {
            selected[b.face] = true;
            boundary_edges.push(b.edge);
        }
    }
    let kept: Vec<bool> = (0..m.num_half_edges()).map(|h| selected[m.face(h)]).collect();
    let in_ball: Vec<bool> = (0..m.num_half_edges()).map(|h| kept[h] || kept[m.alpha(h)]).collect();
    let original: Vec<usize> = (0..m.num_half_edges()).filter(|&h| in_ball[h]).collect();
    let mut local = vec![usize::MAX; m.num_half_edges()];
    for (i, &h) in original.iter().enumerate() {
        local[h] = i;
    }
    let mut phi = Vec::with_capacity(original.len());
    let mut alpha = Vec::with_capacity(original.len());
    for &h in &original {
        let next = if kept[h] {
            m.phi(h)
        } else {
            // walk the unselected corners around the head of h
            let mut y = m.sigma(m.alpha(h));
            while !kept[m.alpha(y)] {
                y = m.sigma(y);
            }
            y
        };
        phi.push(local[next]);
        alpha.push(local[m.alpha(h)]);
    }
    let map = HalfEdgeMap::from_faces(phi, alpha, local[m.root()])
        .expect("dual ball of a connected map is connected");
    let mut holes: Vec<usize> =
        original.iter().enumerate().filter(|(_, &h)| !kept[h]).map(|(i, _)| map.face(i)).collect();
    holes.sort_unstable();
    holes.dedup();
    let boundary_edges: Vec<usize> = boundary_edges.iter().map(|&e| local[e]).collect();
    TriangulationWithHoles::new(map, &boundary_edges, holes).expect("ids in range")
}

/// `(1 + max{r ≥ 0 : B*_r agree})⁻¹`; `1` when even `B*_0` differs.
pub fn dual_local_distance(a: &TriangulationWithHoles, b: &TriangulationWithHoles) -> Ratio<u64> {
    let full = |t: &TriangulationWithHoles| t.num_triangles() + t.boundaries().len();
    for r in 0.. {
        let (ba, bb) = (dual_ball(a, r), dual_ball(b, r));
        if ba.code() != bb.code() {
            return Ratio::new(1, r.max(1) as u64);
        }
        let done_a = ba.num_triangles() + ba.boundaries().len() == full(a);
        let done_b = bb.num_triangles() + bb.boundaries().len() == full(b);
        if done_a && done_b {
            return Ratio::from_integer(0);
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere() -> HalfEdgeMap {
        HalfEdgeMap::from_faces(vec![1, 2, 0, 4, 5, 3], vec![3, 5, 4, 0, 2, 1], 0).unwrap()
    }

    #[test]
    fn radius_zero_is_empty() {
        assert!(ball(&sphere(), 0, None).is_empty());
    }

    #[test]
    fn star_at_root() {
        let m = sphere();
        let b = ball(&m, 1, None);
        // the root vertex of a doubled triangle has degree two
        assert_eq!(b.num_edges(), m.degree(m.origin(m.root())));
        assert_eq!(ball(&m, 2, None).num_edges(), 3);
        assert_eq!(local_distance(&m, &m), Ratio::from_integer(0));
    }

    #[test]
    fn dual_ball_of_sphere() {
        let t = TriangulationWithHoles::closed(sphere());
        let b = dual_ball(&t, 0);
        assert_eq!(b.num_triangles(), 2);
        assert!(b.holes().is_empty());
        assert_eq!(b.validate(), Ok(()));
    }
}
