//! Triangulations with boundaries and holes, their validation and JSON form.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{canonical_code, canonical_labels, RootedCode};
use crate::map::{HalfEdgeMap, MapError};

/// First violated clause of the definition, checked in a fixed order.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    #[error("face {face} is listed twice among boundaries and holes")]
    FaceReused { face: usize },
    #[error("boundary {boundary} visits a vertex twice")]
    VertexSimple { boundary: usize },
    #[error("boundaries {a} and {b} share a vertex")]
    VertexDisjoint { a: usize, b: usize },
    #[error("hole {hole} uses both sides of an edge")]
    EdgeSimple { hole: usize },
    #[error("holes {a} and {b} share an edge")]
    EdgeDisjoint { a: usize, b: usize },
    #[error("the distinguished edge of boundary {boundary} does not have it on its right")]
    RootSide { boundary: usize },
    #[error("internal face {face} has degree {degree}")]
    NonTriangular { face: usize, degree: usize },
    #[error("the dual graph of internal faces is disconnected")]
    DualDisconnected,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("face id {0} out of range")]
    BadFace(usize),
    #[error("half-edge {0} out of range")]
    BadHalfEdge(usize),
    #[error("boundary record ({face}, {edge}) is inconsistent")]
    BoundaryMismatch { face: usize, edge: usize },
    #[error("invalid json: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    pub face: usize,
    pub edge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulationWithHoles {
    map: HalfEdgeMap,
    boundaries: Vec<Boundary>,
    holes: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TriJson {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    root: usize,
    boundaries: Vec<Boundary>,
    holes: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceRole {
    Internal,
    Boundary(usize),
    Hole(usize),
}

impl TriangulationWithHoles {
    /// Boundaries are given by their distinguished half-edges, holes by face ids.
    pub fn new(
        map: HalfEdgeMap,
        boundary_edges: &[usize],
        holes: Vec<usize>,
    ) -> Result<Self, TriError> {
        let n = map.num_half_edges();
        let mut boundaries = Vec::with_capacity(boundary_edges.len());
        for &e in boundary_edges {
            if e >= n {
                return Err(TriError::BadHalfEdge(e));
            }
            boundaries.push(Boundary { face: map.face(e), edge: e });
        }
        if let Some(&f) = holes.iter().find(|&&f| f >= map.num_faces()) {
            return Err(TriError::BadFace(f));
        }
        Ok(TriangulationWithHoles { map, boundaries, holes })
    }

    /// A closed triangulation or a bare map, with no distinguished faces.
    pub fn closed(map: HalfEdgeMap) -> Self {
        TriangulationWithHoles { map, boundaries: Vec::new(), holes: Vec::new() }
    }

    pub fn map(&self) -> &HalfEdgeMap {
        &self.map
    }

    pub fn boundaries(&self) -> &[Boundary] {
        &self.boundaries
    }

    pub fn holes(&self) -> &[usize] {
        &self.holes
    }

    pub fn genus(&self) -> usize {
        self.map.genus()
    }

    pub fn boundary_perimeters(&self) -> Vec<usize> {
        self.boundaries.iter().map(|b| self.map.face_degree(b.face)).collect()
    }

    pub fn hole_perimeters(&self) -> Vec<usize> {
        self.holes.iter().map(|&f| self.map.face_degree(f)).collect()
    }

    pub fn face_roles(&self) -> Vec<FaceRole> {
        let mut role = vec![FaceRole::Internal; self.map.num_faces()];
        for (i, &f) in self.holes.iter().enumerate() {
            role[f] = FaceRole::Hole(i);
        }
        for (i, b) in self.boundaries.iter().enumerate() {
            role[b.face] = FaceRole::Boundary(i);
        }
        role
    }

    /// Faces that are neither boundaries nor holes.
    pub fn num_triangles(&self) -> usize {
        self.face_roles().iter().filter(|r| matches!(r, FaceRole::Internal)).count()
    }

    /// Vertices not lying on any boundary.
    pub fn num_internal_vertices(&self) -> usize {
        let mut on = vec![false; self.map.num_vertices()];
        for b in &self.boundaries {
            for h in self.map.face_half_edges(b.face) {
                on[self.map.origin(h)] = true;
            }
        }
        on.iter().filter(|&&x| !x).count()
    }

    /// Size index `n`: half of `triangles + Σ(p − 2)` over boundaries and holes.
    pub fn size_index(&self) -> Option<i64> {
        let t = self.num_triangles() as i64;
        let s: i64 = self.boundary_perimeters().iter().map(|&p| p as i64 - 2).sum();
        let q: i64 = self.hole_perimeters().iter().map(|&p| p as i64 - 2).sum();
        let x = t + s + q;
        (x % 2 == 0).then_some(x / 2)
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let m = &self.map;
        let mut used = BTreeSet::new();
        for f in self.boundaries.iter().map(|b| b.face).chain(self.holes.iter().copied()) {
            if !used.insert(f) {
                return Err(Violation::FaceReused { face: f });
            }
        }
        let mut owner = vec![usize::MAX; m.num_vertices()];
        for (i, b) in self.boundaries.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for h in m.face_half_edges(b.face) {
                if !seen.insert(m.origin(h)) {
                    return Err(Violation::VertexSimple { boundary: i });
                }
            }
            for &v in &seen {
                if owner[v] != usize::MAX {
                    return Err(Violation::VertexDisjoint { a: owner[v], b: i });
                }
                owner[v] = i;
            }
        }
        let mut edge_owner = vec![usize::MAX; m.num_half_edges()];
        for (i, &f) in self.holes.iter().enumerate() {
            for h in m.face_half_edges(f) {
                let e = m.edge_id(h);
                match edge_owner[e] {
                    usize::MAX => edge_owner[e] = i,
                    j if j == i => return Err(Violation::EdgeSimple { hole: i }),
                    j => return Err(Violation::EdgeDisjoint { a: j, b: i }),
                }
            }
        }
        for (i, b) in self.boundaries.iter().enumerate() {
            if m.face(b.edge) != b.face {
                return Err(Violation::RootSide { boundary: i });
            }
        }
        let role = self.face_roles();
        for (f, r) in role.iter().enumerate() {
            if matches!(r, FaceRole::Internal) {
                let d = m.face_degree(f);
                if d != 3 {
                    return Err(Violation::NonTriangular { face: f, degree: d });
                }
            }
        }
        let internal: Vec<usize> =
            (0..m.num_faces()).filter(|&f| !matches!(role[f], FaceRole::Boundary(_))).collect();
        if let Some(&start) = internal.first() {
            let mut seen = vec![false; m.num_faces()];
            seen[start] = true;
            let mut count = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(f) = queue.pop_front() {
                for h in m.face_half_edges(f) {
                    let g = m.face(m.alpha(h));
                    if !seen[g] && !matches!(role[g], FaceRole::Boundary(_)) {
                        seen[g] = true;
                        count += 1;
                        queue.push_back(g);
                    }
                }
            }
            if count != internal.len() {
                return Err(Violation::DualDisconnected);
            }
        }
        Ok(())
    }

    /// Canonical code of the map followed by the distinguished data in canonical labels.
    pub fn code(&self) -> RootedCode {
        let mut code = canonical_code(&self.map).0;
        let label = canonical_labels(&self.map);
        code.push(u32::MAX);
        code.push(self.boundaries.len() as u32);
        for b in &self.boundaries {
            code.push(label[b.edge]);
        }
        let mut hole_keys: Vec<u32> = self
            .holes
            .iter()
            .map(|&f| self.map.face_half_edges(f).iter().map(|&h| label[h]).min().unwrap())
            .collect();
        hole_keys.sort_unstable();
        code.push(hole_keys.len() as u32);
        code.extend(hole_keys);
        RootedCode(code)
    }

    pub fn to_json(&self) -> String {
        let j = TriJson {
            sigma: self.map.sigma_slice().to_vec(),
            alpha: self.map.alpha_slice().to_vec(),
            root: self.map.root(),
            boundaries: self.boundaries.clone(),
            holes: self.holes.clone(),
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, TriError> {
        let j: TriJson = serde_json::from_str(s).map_err(|e| TriError::Json(e.to_string()))?;
        let map = HalfEdgeMap::new(j.sigma, j.alpha, j.root)?;
        let n = map.num_half_edges();
        for b in &j.boundaries {
            if b.edge >= n || map.face(b.edge) != b.face {
                return Err(TriError::BoundaryMismatch { face: b.face, edge: b.edge });
            }
        }
        if let Some(&f) = j.holes.iter().find(|&&f| f >= map.num_faces()) {
            return Err(TriError::BadFace(f));
        }
        Ok(TriangulationWithHoles { map, boundaries: j.boundaries, holes: j.holes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygon(p: usize) -> TriangulationWithHoles {
        // boundary face 0..p on the right of the root, outer face p..2p
        let n = 2 * p;
        let mut phi = vec![0; n];
        let mut alpha = vec![0; n];
        for i in 0..p {
            phi[i] = (i + 1) % p;
            phi[p + i] = p + (i + p - 1) % p;
            alpha[i] = p + i;
            alpha[p + i] = i;
        }
        let m = HalfEdgeMap::from_faces(phi, alpha, 0).unwrap();
        let hole = m.face(p);
        TriangulationWithHoles::new(m, &[0], vec![hole]).unwrap()
    }

    #[test]
    fn polygon_is_valid() {
        for p in 1..8 {
            let t = polygon(p);
            assert_eq!(t.validate(), Ok(()));
            assert_eq!(t.boundary_perimeters(), vec![p]);
        }
    }

    #[test]
    fn pinched_boundary_is_not_vertex_simple() {
        // a figure-eight: two loops at one vertex, one face traverses both
        let sigma = vec![1, 2, 3, 0];
        let alpha = vec![1, 0, 3, 2];
        let m = HalfEdgeMap::new(sigma, alpha, 0).unwrap();
        let big = (0..4).map(|h| m.face(h)).find(|&f| m.face_degree(f) == 2).unwrap();
        let e = m.face_half_edges(big)[0];
        let t = TriangulationWithHoles::new(m, &[e], vec![]).unwrap();
        assert_eq!(t.validate(), Err(Violation::VertexSimple { boundary: 0 }));
    }

    #[test]
    fn holes_sharing_an_edge() {
        let t = polygon(3);
        let m = t.map().clone();
        let t2 = TriangulationWithHoles::new(m.clone(), &[], vec![m.face(0), m.face(3)]).unwrap();
        assert_eq!(t2.validate(), Err(Violation::EdgeDisjoint { a: 0, b: 1 }));
    }

    #[test]
    fn json_round_trip() {
        let t = polygon(4);
        let s = t.to_json();
        let u = TriangulationWithHoles::from_json(&s).unwrap();
        assert_eq!(t, u);
        assert_eq!(s, u.to_json());
    }
}
