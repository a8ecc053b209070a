//! Rooted orientable maps stored as two permutations on dense half-edge indices.
//!
//! `sigma` rotates counterclockwise around the origin of a half-edge and
//! `alpha` pairs the two halves of an edge. Faces are the cycles of
//! `phi = sigma ∘ alpha`, i.e. `phi(h) = sigma(alpha(h))`. Throughout the
//! crate the face *on the right* of an oriented edge is the face containing
//! the half-edge itself; its reversal `alpha(h)` sees that face on its left.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("sigma has {sigma} entries but alpha has {alpha}")]
    LengthMismatch { sigma: usize, alpha: usize },
    #[error("sigma is not a permutation")]
    NotPermutation,
    #[error("alpha is not an involution at half-edge {0}")]
    NotInvolution(usize),
    #[error("alpha fixes half-edge {0}")]
    FixedPoint(usize),
    #[error("the group generated by sigma and alpha is not transitive")]
    Disconnected,
    #[error("root {root} out of range for {len} half-edges")]
    BadRoot { root: usize, len: usize },
    #[error("a map needs at least one edge")]
    Empty,
}

/// A connected rooted map. Immutable once built; all derived data is cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfEdgeMap {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    root: usize,
    vertex: Vec<usize>,
    face: Vec<usize>,
    vertex_first: Vec<usize>,
    face_first: Vec<usize>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn cycles(next: impl Fn(usize) -> usize, n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut id = vec![usize::MAX; n];
    let mut first = Vec::new();
    for h in 0..n {
        if id[h] != usize::MAX {
            continue;
        }
        let c = first.len();
        first.push(h);
        let mut x = h;
        while id[x] == usize::MAX {
            id[x] = c;
            x = next(x);
        }
    }
    (id, first)
}

impl HalfEdgeMap {
    /// Validates and builds a map from its rotation and edge involution.
    pub fn new(sigma: Vec<usize>, alpha: Vec<usize>, root: usize) -> Result<Self, MapError> {
        let n = sigma.len();
        if alpha.len() != n {
            return Err(MapError::LengthMismatch { sigma: n, alpha: alpha.len() });
        }
        if n == 0 {
            return Err(MapError::Empty);
        }
        if root >= n {
            return Err(MapError::BadRoot { root, len: n });
        }
        if !is_permutation(&sigma) {
            return Err(MapError::NotPermutation);
        }
        for h in 0..n {
            let a = alpha[h];
            if a >= n || alpha[a] != h {
                return Err(MapError::NotInvolution(h));
            }
            if a == h {
                return Err(MapError::FixedPoint(h));
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        let mut count = 1;
        while let Some(h) = queue.pop_front() {
            for x in [sigma[h], alpha[h]] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    queue.push_back(x);
                }
            }
        }
        if count != n {
            return Err(MapError::Disconnected);
        }
        let (vertex, vertex_first) = cycles(|h| sigma[h], n);
        let (face, face_first) = cycles(|h| sigma[alpha[h]], n);
        Ok(HalfEdgeMap { sigma, alpha, root, vertex, face, vertex_first, face_first })
    }

    /// Builds a map from its face permutation `phi` instead of the rotation.
    pub fn from_faces(phi: Vec<usize>, alpha: Vec<usize>, root: usize) -> Result<Self, MapError> {
        if phi.len() != alpha.len() {
            return Err(MapError::LengthMismatch { sigma: phi.len(), alpha: alpha.len() });
        }
        if !is_permutation(&phi) {
            return Err(MapError::NotPermutation);
        }
        if alpha.iter().any(|&a| a >= alpha.len()) {
            return Err(MapError::NotInvolution(0));
        }
        let sigma = (0..phi.len()).map(|h| phi[alpha[h]]).collect();
        Self::new(sigma, alpha, root)
    }

    pub fn sigma(&self, h: usize) -> usize {
        self.sigma[h]
    }

    pub fn sigma_inv(&self, h: usize) -> usize {
        let mut x = h;
        loop {
            let y = self.sigma[x];
            if y == h {
                return x;
            }
            x = y;
        }
    }

    pub fn alpha(&self, h: usize) -> usize {
        self.alpha[h]
    }

    /// Next half-edge along the face on the right of `h`.
    pub fn phi(&self, h: usize) -> usize {
        self.sigma[self.alpha[h]]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn sigma_slice(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha_slice(&self) -> &[usize] {
        &self.alpha
    }

    pub fn num_half_edges(&self) -> usize {
        self.sigma.len()
    }

    pub fn num_edges(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_first.len()
    }

    pub fn num_faces(&self) -> usize {
        self.face_first.len()
    }

    /// Genus from Euler's formula `V − E + F = 2 − 2g`.
    pub fn genus(&self) -> usize {
        let chi = self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64;
        debug_assert!(chi <= 2 && (2 - chi) % 2 == 0);
        ((2 - chi) / 2) as usize
    }

    /// Vertex id of the origin of `h`.
    pub fn origin(&self, h: usize) -> usize {
        self.vertex[h]
    }

    pub fn head(&self, h: usize) -> usize {
        self.vertex[self.alpha[h]]
    }

    /// Face id of the face on the right of `h`.
    pub fn face(&self, h: usize) -> usize {
        self.face[h]
    }

    /// Canonical edge id: the smaller of the two half-edge indices.
    pub fn edge_id(&self, h: usize) -> usize {
        h.min(self.alpha[h])
    }

    pub fn face_half_edges(&self, f: usize) -> Vec<usize> {
        let start = self.face_first[f];
        let mut out = vec![start];
        let mut x = self.phi(start);
        while x != start {
            out.push(x);
            x = self.phi(x);
        }
        out
    }

    pub fn face_degree(&self, f: usize) -> usize {
        self.face_half_edges(f).len()
    }

    /// Half-edges leaving vertex `v`, in counterclockwise order.
    pub fn vertex_half_edges(&self, v: usize) -> Vec<usize> {
        let start = self.vertex_first[v];
        let mut out = vec![start];
        let mut x = self.sigma[start];
        while x != start {
            out.push(x);
            x = self.sigma[x];
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_half_edges(v).len()
    }

    pub fn with_root(&self, root: usize) -> Result<Self, MapError> {
        if root >= self.num_half_edges() {
            return Err(MapError::BadRoot { root, len: self.num_half_edges() });
        }
        let mut m = self.clone();
        m.root = root;
        Ok(m)
    }

    /// Renames half-edge `h` to `perm[h]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, MapError> {
        let n = self.num_half_edges();
        if perm.len() != n || !is_permutation(perm) {
            return Err(MapError::NotPermutation);
        }
        let mut sigma = vec![0; n];
        let mut alpha = vec![0; n];
        for h in 0..n {
            sigma[perm[h]] = perm[self.sigma[h]];
            alpha[perm[h]] = perm[self.alpha[h]];
        }
        Self::new(sigma, alpha, perm[self.root])
    }

    /// Graph distances from vertex `from`, optionally ignoring some half-edges.
    pub fn vertex_distances(&self, from: usize, usable: Option<&[bool]>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_vertices()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for h in self.vertex_half_edges(v) {
                if usable.is_some_and(|u| !u[h]) {
                    continue;
                }
                let w = self.head(h);
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sphere_two_triangles() -> HalfEdgeMap {
        // faces (0 1 2) and (3 4 5) glued with 0~3, 1~5, 2~4
        let phi = vec![1, 2, 0, 4, 5, 3];
        let alpha = vec![3, 5, 4, 0, 2, 1];
        HalfEdgeMap::from_faces(phi, alpha, 0).unwrap()
    }

    pub(crate) fn torus_square() -> HalfEdgeMap {
        // square a b a⁻¹ b⁻¹: sides 0 1 2 3, 0~2, 1~3
        HalfEdgeMap::from_faces(vec![1, 2, 3, 0], vec![2, 3, 0, 1], 0).unwrap()
    }

    #[test]
    fn sphere_counts() {
        let m = sphere_two_triangles();
        assert_eq!((m.num_vertices(), m.num_edges(), m.num_faces(), m.genus()), (3, 3, 2, 0));
    }

    #[test]
    fn torus_counts() {
        let m = torus_square();
        assert_eq!((m.num_vertices(), m.num_edges(), m.num_faces(), m.genus()), (1, 2, 1, 1));
    }

    #[test]
    fn rejects_bad_alpha() {
        assert_eq!(HalfEdgeMap::new(vec![1, 0], vec![0, 1], 0), Err(MapError::FixedPoint(0)));
        assert_eq!(
            HalfEdgeMap::new(vec![0, 1, 2, 3], vec![1, 2, 3, 0], 0),
            Err(MapError::NotInvolution(0))
        );
        assert_eq!(
            HalfEdgeMap::new(vec![0, 1, 2, 3], vec![1, 0, 3, 2], 0),
            Err(MapError::Disconnected)
        );
    }

    #[test]
    fn origins_agree_with_faces() {
        let m = sphere_two_triangles();
        for h in 0..m.num_half_edges() {
            // phi(h) leaves the head of h
            assert_eq!(m.origin(m.phi(h)), m.head(h));
        }
    }
}
