//! Incremental explored regions: a triangulation with holes grown one
//! triangle at a time.
//!
//! Every live half-edge either belongs to an explored face (a triangle or a
//! boundary polygon) or is a side of a hole. Hole sides are stored as lists in
//! `phi` order: a side `s_i` goes from `v_i` to `v_{i+1}`. Moving forward along
//! the list is moving *left* along the hole.
//!
//! Peeling side `s_0 = (v_0 → v_1)` reveals the triangle `(s_0, a, b)` with
//! `a = (v_1 → z)` and `b = (z → v_0)`; the new hole sides are `a' = alpha(a)`
//! and `b' = alpha(b)`.

use std::collections::VecDeque;

use crate::map::HalfEdgeMap;
use crate::tri::TriangulationWithHoles;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Face(usize),
    Hole(usize),
    Dead,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceKind {
    Triangle,
    Boundary { label: usize },
}

/// Where the third vertex of a peeled triangle lies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Third {
    /// A vertex never seen before.
    New,
    /// The origin of side `j` of the same hole, indices relative to the peeled
    /// side; `j = 0` is `v_0` itself.
    SameHole(usize),
    /// The origin of side `index` (absolute) of another hole.
    OtherHole { hole: usize, index: usize },
    /// Vertex `m` of a newly discovered boundary polygon of perimeter `perimeter`.
    NewBoundary { label: usize, perimeter: usize, offset: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelStep {
    pub peeled: usize,
    pub triangle: usize,
    pub third: usize,
    /// Half-edges `a'` and `b'`.
    pub new_sides: [usize; 2],
    /// Holes created by the step: `[left, right]` for a split, one hole otherwise.
    pub holes: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
struct HalfPlane {
    vb: usize,
    vh: usize,
    before_vb: usize,
}

#[derive(Clone, Debug)]
pub struct Explorer {
    alpha: Vec<usize>,
    next: Vec<usize>,
    origin: Vec<usize>,
    slot: Vec<Slot>,
    virt: Vec<bool>,
    faces: Vec<FaceKind>,
    face_first: Vec<usize>,
    holes: Vec<Option<Vec<usize>>>,
    n_vertices: usize,
    root: usize,
    boundary_roots: Vec<(usize, usize)>,
    hp: Option<HalfPlane>,
}

/// Explored region exported as a static map.
#[derive(Clone, Debug)]
pub struct Export {
    pub tri: TriangulationWithHoles,
    /// Explorer half-edge of each map half-edge.
    pub to_explorer: Vec<usize>,
    /// Map half-edge of each explorer half-edge (`usize::MAX` when dead).
    pub to_map: Vec<usize>,
    /// `false` on virtual half-edges.
    pub usable: Vec<bool>,
    /// Explorer hole id of each hole of `tri`, in the same order.
    pub hole_ids: Vec<usize>,
}

impl Explorer {
    fn empty() -> Self {
        Explorer {
            alpha: Vec::new(),
            next: Vec::new(),
            origin: Vec::new(),
            slot: Vec::new(),
            virt: Vec::new(),
            faces: Vec::new(),
            face_first: Vec::new(),
            holes: Vec::new(),
            n_vertices: 0,
            root: 0,
            boundary_roots: Vec::new(),
            hp: None,
        }
    }

    fn new_half_edge(&mut self, origin: usize) -> usize {
        let h = self.alpha.len();
        self.alpha.push(usize::MAX);
        self.next.push(usize::MAX);
        self.origin.push(origin);
        self.slot.push(Slot::Dead);
        self.virt.push(false);
        h
    }

    fn new_vertex(&mut self) -> usize {
        self.n_vertices += 1;
        self.n_vertices - 1
    }

    fn new_hole(&mut self, sides: Vec<usize>) -> usize {
        let id = self.holes.len();
        for &s in &sides {
            self.slot[s] = Slot::Hole(id);
        }
        self.holes.push(Some(sides));
        id
    }

    /// Adds a boundary polygon with fresh vertices and returns its outer sides
    /// `d_0..d_{p-1}` where `d_i = alpha(c_i)` and `c_i` leaves vertex `i`.
    fn add_polygon(&mut self, p: usize, label: usize) -> (Vec<usize>, Vec<usize>) {
        let verts: Vec<usize> = (0..p).map(|_| self.new_vertex()).collect();
        let c: Vec<usize> = (0..p).map(|i| self.new_half_edge(verts[i])).collect();
        let d: Vec<usize> = (0..p).map(|i| self.new_half_edge(verts[(i + 1) % p])).collect();
        let f = self.faces.len();
        self.faces.push(FaceKind::Boundary { label });
        self.face_first.push(c[0]);
        for i in 0..p {
            self.alpha[c[i]] = d[i];
            self.alpha[d[i]] = c[i];
            self.next[c[i]] = c[(i + 1) % p];
            self.slot[c[i]] = Slot::Face(f);
        }
        self.boundary_roots.push((label, c[0]));
        (c, d)
    }

    /// A single boundary polygon of perimeter `p` surrounded by one hole.
    pub fn polygon(p: usize, label: usize) -> (Self, usize) {
        assert!(p >= 1);
        let mut e = Self::empty();
        let (c, d) = e.add_polygon(p, label);
        e.root = c[0];
        let sides: Vec<usize> = (0..p).map(|k| d[(p - k) % p]).collect();
        let h = e.new_hole(sides);
        (e, h)
    }

    /// Several boundaries, each in its own hole; only sensible as the start of
    /// an exploration that will merge them.
    pub fn polygons(perimeters: &[usize]) -> (Self, Vec<usize>) {
        let mut e = Self::empty();
        let mut holes = Vec::new();
        for (label, &p) in perimeters.iter().enumerate() {
            let (c, d) = e.add_polygon(p, label);
            if label == 0 {
                e.root = c[0];
            }
            let sides: Vec<usize> = (0..p).map(|k| d[(p - k) % p]).collect();
            holes.push(e.new_hole(sides));
        }
        (e, holes)
    }

    /// One boundary edge of an infinite boundary, closed by a virtual edge.
    /// The hole list is `[t_0, v]` with `t_0 = alpha(root)` and `v` virtual.
    pub fn half_plane() -> (Self, usize) {
        let mut e = Self::empty();
        let b0 = e.new_vertex();
        let b1 = e.new_vertex();
        let c0 = e.new_half_edge(b0);
        let vb = e.new_half_edge(b1);
        let t0 = e.new_half_edge(b1);
        let vh = e.new_half_edge(b0);
        e.alpha[c0] = t0;
        e.alpha[t0] = c0;
        e.alpha[vb] = vh;
        e.alpha[vh] = vb;
        e.virt[vb] = true;
        e.virt[vh] = true;
        e.faces.push(FaceKind::Boundary { label: 0 });
        e.face_first.push(c0);
        e.next[c0] = vb;
        e.next[vb] = c0;
        e.slot[c0] = Slot::Face(0);
        e.slot[vb] = Slot::Face(0);
        e.root = c0;
        e.boundary_roots.push((0, c0));
        e.hp = Some(HalfPlane { vb, vh, before_vb: c0 });
        let h = e.new_hole(vec![t0, vh]);
        (e, h)
    }

    pub fn virtual_hole_side(&self) -> Option<usize> {
        self.hp.map(|h| h.vh)
    }

    /// Adds a boundary edge just before the virtual side of the hole (on the
    /// left end of the explored frontier). Returns the new hole side.
    pub fn extend_left(&mut self) -> usize {
        self.extend_left_by(1)[0]
    }

    /// `k` calls of [`extend_left`](Self::extend_left) at once; returns the
    /// new sides, innermost first.
    pub fn extend_left_by(&mut self, k: usize) -> Vec<usize> {
        let hp = self.hp.expect("half-plane explorer");
        let mut added = Vec::with_capacity(k);
        for _ in 0..k {
            let x = self.origin[hp.vh];
            let u = self.new_vertex();
            let n = self.new_half_edge(x);
            let n2 = self.new_half_edge(u);
            self.alpha[n] = n2;
            self.alpha[n2] = n;
            self.origin[hp.vh] = u;
            self.next[n2] = self.next[hp.vb];
            self.next[hp.vb] = n2;
            self.slot[n2] = self.slot[hp.vb];
            added.push(n);
        }
        let Slot::Hole(h) = self.slot[hp.vh] else { unreachable!() };
        for &n in &added {
            self.slot[n] = Slot::Hole(h);
        }
        let list = self.holes[h].as_mut().unwrap();
        let pos = list.iter().position(|&s| s == hp.vh).unwrap();
        list.splice(pos..pos, added.iter().copied());
        added
    }

    /// Adds a boundary edge just after the virtual side (right end of the frontier).
    pub fn extend_right(&mut self) -> usize {
        self.extend_right_by(1)[0]
    }

    /// `k` calls of [`extend_right`](Self::extend_right) at once; returns the
    /// new sides, innermost first.
    pub fn extend_right_by(&mut self, k: usize) -> Vec<usize> {
        let hp0 = self.hp.expect("half-plane explorer");
        let mut added = Vec::with_capacity(k);
        for _ in 0..k {
            let hp = self.hp.unwrap();
            let y = self.origin[hp.vb];
            let u = self.new_vertex();
            let n = self.new_half_edge(u);
            let n2 = self.new_half_edge(y);
            self.alpha[n] = n2;
            self.alpha[n2] = n;
            self.origin[hp.vb] = u;
            self.next[hp.before_vb] = n2;
            self.next[n2] = hp.vb;
            self.slot[n2] = self.slot[hp.vb];
            self.hp.as_mut().unwrap().before_vb = n2;
            added.push(n);
        }
        let Slot::Hole(h) = self.slot[hp0.vh] else { unreachable!() };
        for &n in &added {
            self.slot[n] = Slot::Hole(h);
        }
        let list = self.holes[h].as_mut().unwrap();
        let pos = list.iter().position(|&s| s == hp0.vh).unwrap();
        list.splice(pos + 1..pos + 1, added.iter().rev().copied());
        added
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn alpha(&self, h: usize) -> usize {
        self.alpha[h]
    }

    pub fn origin(&self, h: usize) -> usize {
        self.origin[h]
    }

    pub fn head(&self, h: usize) -> usize {
        self.origin[self.alpha[h]]
    }

    pub fn slot(&self, h: usize) -> Slot {
        self.slot[h]
    }

    pub fn is_virtual(&self, h: usize) -> bool {
        self.virt[h]
    }

    pub fn face_kind(&self, f: usize) -> FaceKind {
        self.faces[f]
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_triangles(&self) -> usize {
        (0..self.faces.len())
            .filter(|&f| self.face_is_live(f) && self.faces[f] == FaceKind::Triangle)
            .count()
    }

    pub fn num_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn num_half_edges(&self) -> usize {
        self.alpha.len()
    }

    pub fn face_half_edges(&self, f: usize) -> Vec<usize> {
        let start = self.face_first[f];
        let mut out = vec![start];
        let mut x = self.next[start];
        while x != start {
            out.push(x);
            x = self.next[x];
        }
        out
    }

    pub fn hole(&self, id: usize) -> Option<&[usize]> {
        self.holes.get(id).and_then(|h| h.as_deref())
    }

    pub fn live_holes(&self) -> Vec<usize> {
        (0..self.holes.len()).filter(|&i| self.holes[i].is_some()).collect()
    }

    pub fn num_live_holes(&self) -> usize {
        self.holes.iter().filter(|h| h.is_some()).count()
    }

    pub fn hole_len(&self, id: usize) -> usize {
        self.hole(id).map_or(0, |h| h.len())
    }

    /// Hole and index of a hole side.
    pub fn locate(&self, h: usize) -> Option<(usize, usize)> {
        match self.slot[h] {
            Slot::Hole(id) => {
                let idx = self.holes[id].as_ref()?.iter().position(|&s| s == h)?;
                Some((id, idx))
            }
            _ => None,
        }
    }

    pub fn boundary_root(&self, label: usize) -> Option<usize> {
        self.boundary_roots.iter().find(|(l, _)| *l == label).map(|&(_, e)| e)
    }

    pub fn boundary_labels(&self) -> Vec<usize> {
        self.boundary_roots.iter().map(|&(l, _)| l).collect()
    }

    /// Peels side `index` of hole `hole`.
    pub fn peel(&mut self, hole: usize, index: usize, third: Third) -> PeelStep {
        let mut l = self.holes[hole].take().expect("live hole");
        l.rotate_left(index);
        let q = l.len();
        let s = l[0];
        debug_assert!(!self.virt[s], "cannot peel a virtual side");
        let v0 = self.origin[s];
        let v1 = self.head(s);
        let z = match third {
            Third::New => self.new_vertex(),
            Third::SameHole(j) => {
                assert!(j < q, "split index out of range");
                self.origin[l[j]]
            }
            Third::OtherHole { hole: h2, index } => {
                assert_ne!(h2, hole);
                self.origin[self.holes[h2].as_ref().expect("live hole")[index]]
            }
            Third::NewBoundary { .. } => usize::MAX,
        };
        let mut boundary_walk = Vec::new();
        let z = if let Third::NewBoundary { label, perimeter, offset } = third {
            let (c, d) = self.add_polygon(perimeter, label);
            let p = perimeter;
            for k in 0..p {
                boundary_walk.push(d[(offset + p - 1 - k) % p]);
            }
            self.origin[c[offset % p]]
        } else {
            z
        };
        let a = self.new_half_edge(v1);
        let b = self.new_half_edge(z);
        let a2 = self.new_half_edge(z);
        let b2 = self.new_half_edge(v0);
        self.alpha[a] = a2;
        self.alpha[a2] = a;
        self.alpha[b] = b2;
        self.alpha[b2] = b;
        let t = self.faces.len();
        self.faces.push(FaceKind::Triangle);
        self.face_first.push(s);
        self.next[s] = a;
        self.next[a] = b;
        self.next[b] = s;
        for x in [s, a, b] {
            self.slot[x] = Slot::Face(t);
        }
        let holes = match third {
            Third::New => {
                let mut n = vec![b2, a2];
                n.extend_from_slice(&l[1..]);
                vec![self.new_hole(n)]
            }
            Third::SameHole(j) => {
                let (left, right) = if j == 0 {
                    let mut left = vec![a2];
                    left.extend_from_slice(&l[1..]);
                    (left, vec![b2])
                } else {
                    let mut left = vec![a2];
                    left.extend_from_slice(&l[1..j]);
                    let mut right = vec![b2];
                    right.extend_from_slice(&l[j..]);
                    (left, right)
                };
                let hl = self.new_hole(left);
                let hr = self.new_hole(right);
                vec![hl, hr]
            }
            Third::OtherHole { hole: h2, index } => {
                let mut other = self.holes[h2].take().unwrap();
                other.rotate_left(index);
                let mut n = vec![b2];
                n.extend(other);
                n.push(a2);
                n.extend_from_slice(&l[1..]);
                vec![self.new_hole(n)]
            }
            Third::NewBoundary { .. } => {
                let mut n = vec![b2];
                n.extend(boundary_walk);
                n.push(a2);
                n.extend_from_slice(&l[1..]);
                vec![self.new_hole(n)]
            }
        };
        PeelStep { peeled: s, triangle: t, third: z, new_sides: [a2, b2], holes }
    }

    /// Closes a hole of perimeter 2 by identifying its two sides.
    pub fn close_two_gon(&mut self, hole: usize) {
        let l = self.holes[hole].take().expect("live hole");
        assert_eq!(l.len(), 2, "only 2-gons close without triangles");
        let (x, y) = (l[0], l[1]);
        let (ax, ay) = (self.alpha[x], self.alpha[y]);
        self.alpha[ax] = ay;
        self.alpha[ay] = ax;
        for h in [x, y] {
            self.slot[h] = Slot::Dead;
            self.alpha[h] = usize::MAX;
        }
        if self.root == x || self.root == y {
            self.root = if self.root == x { ay } else { ax };
        }
        if let Some(hp) = self.hp.as_mut() {
            if hp.vh == x || hp.vh == y {
                unreachable!("the virtual side never closes");
            }
        }
    }

    /// Turns a 1-gon exploration whose first step was peeled into an
    /// exploration of a map without boundary: the boundary loop and the first
    /// triangle are removed and its two other edges identified.
    pub fn remove_root_loop(&mut self) -> Result<(), &'static str> {
        let c0 = self.root;
        let Slot::Face(f0) = self.slot[c0] else { return Err("root is not on a face") };
        if self.faces[f0] != (FaceKind::Boundary { label: 0 }) || self.next[c0] != c0 {
            return Err("root is not a boundary loop");
        }
        let d0 = self.alpha[c0];
        let Slot::Face(t) = self.slot[d0] else { return Err("the root loop is not peeled yet") };
        let a = self.next[d0];
        let b = self.next[a];
        let (a2, b2) = (self.alpha[a], self.alpha[b]);
        self.alpha[a2] = b2;
        self.alpha[b2] = a2;
        for h in [c0, d0, a, b] {
            self.slot[h] = Slot::Dead;
            self.alpha[h] = usize::MAX;
        }
        // face ids stay stable; removed faces are skipped
        self.face_first[t] = usize::MAX;
        self.face_first[f0] = usize::MAX;
        self.boundary_roots.clear();
        self.root = b2;
        Ok(())
    }

    pub fn face_is_live(&self, f: usize) -> bool {
        self.face_first[f] != usize::MAX
    }

    /// Live explored or hole half-edges.
    pub fn is_live(&self, h: usize) -> bool {
        !matches!(self.slot[h], Slot::Dead)
    }

    /// Graph distances from the root vertex over live, non-virtual edges.
    pub fn vertex_distances(&self) -> Vec<Option<usize>> {
        self.vertex_distances_from(&[self.origin[self.root]])
    }

    pub fn vertex_distances_from(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for h in 0..self.alpha.len() {
            if self.is_live(h) && !self.virt[h] {
                adj[self.origin[h]].push(self.head(h));
            }
        }
        let mut dist = vec![None; self.n_vertices];
        let mut queue = VecDeque::new();
        for &s in sources {
            dist[s] = Some(0);
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Successor of a live half-edge along its face or hole.
    pub fn phi(&self, h: usize) -> usize {
        match self.slot[h] {
            Slot::Face(_) => self.next[h],
            Slot::Hole(id) => {
                let l = self.holes[id].as_ref().unwrap();
                let i = l.iter().position(|&s| s == h).unwrap();
                l[(i + 1) % l.len()]
            }
            Slot::Dead => panic!("dead half-edge"),
        }
    }

    pub fn export(&self) -> Export {
        let n = self.alpha.len();
        let to_explorer: Vec<usize> = (0..n).filter(|&h| self.is_live(h)).collect();
        let mut to_map = vec![usize::MAX; n];
        for (i, &h) in to_explorer.iter().enumerate() {
            to_map[h] = i;
        }
        let mut phi = vec![0; to_explorer.len()];
        for &h in &to_explorer {
            if let Slot::Face(_) = self.slot[h] {
                phi[to_map[h]] = to_map[self.next[h]];
            }
        }
        let mut hole_ids = Vec::new();
        for (id, l) in self.holes.iter().enumerate() {
            if let Some(l) = l {
                for i in 0..l.len() {
                    phi[to_map[l[i]]] = to_map[l[(i + 1) % l.len()]];
                }
                hole_ids.push(id);
            }
        }
        let alpha: Vec<usize> = to_explorer.iter().map(|&h| to_map[self.alpha[h]]).collect();
        let map = HalfEdgeMap::from_faces(phi, alpha, to_map[self.root]).expect("explored region is a map");
        let mut labels: Vec<(usize, usize)> = self.boundary_roots.clone();
        labels.sort_unstable();
        let boundary_edges: Vec<usize> = labels.iter().map(|&(_, e)| to_map[e]).collect();
        let holes: Vec<usize> = hole_ids
            .iter()
            .map(|&id| map.face(to_map[self.holes[id].as_ref().unwrap()[0]]))
            .collect();
        let usable = to_explorer.iter().map(|&h| !self.virt[h]).collect();
        let tri = TriangulationWithHoles::new(map, &boundary_edges, holes).expect("ids in range");
        Export { tri, to_explorer, to_map, usable, hole_ids }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(e: &Explorer) {
        let x = e.export();
        assert_eq!(x.tri.validate(), Ok(()), "invalid explored region");
        for &h in &x.to_explorer {
            assert_eq!(e.origin(e.phi(h)), e.head(h), "phi does not chain at {h}");
        }
    }

    #[test]
    fn polygon_start() {
        for p in 1..6 {
            let (e, h) = Explorer::polygon(p, 0);
            assert_eq!(e.hole_len(h), p);
            check(&e);
        }
    }

    #[test]
    fn each_step_kind_keeps_validity() {
        let (mut e, h) = Explorer::polygon(4, 0);
        let s = e.peel(h, 0, Third::New);
        check(&e);
        let h = s.holes[0];
        assert_eq!(e.hole_len(h), 5);
        let s = e.peel(h, 1, Third::SameHole(2));
        check(&e);
        let [l, r] = [s.holes[0], s.holes[1]];
        assert_eq!((e.hole_len(l), e.hole_len(r)), (2, 4));
        let s = e.peel(l, 0, Third::NewBoundary { label: 1, perimeter: 3, offset: 1 });
        check(&e);
        let m = s.holes[0];
        let (len, len_r) = (e.hole_len(m), e.hole_len(r));
        e.peel(m, 0, Third::OtherHole { hole: r, index: 0 });
        check(&e);
        assert_eq!(e.num_live_holes(), 1);
        let h = e.live_holes()[0];
        assert_eq!(e.hole_len(h), len + len_r + 1);
    }

    #[test]
    fn two_gon_closes() {
        let (mut e, h) = Explorer::polygon(2, 0);
        e.close_two_gon(h);
        check(&e);
        let x = e.export();
        assert_eq!(x.tri.map().num_edges(), 1);
    }

    #[test]
    fn half_plane_extensions() {
        let (mut e, h) = Explorer::half_plane();
        check(&e);
        e.extend_left();
        e.extend_right();
        e.extend_left();
        check(&e);
        assert_eq!(e.hole_len(h), 5);
        let s = e.peel(h, 0, Third::New);
        check(&e);
        assert_eq!(e.hole_len(s.holes[0]), 6);
    }

    #[test]
    fn root_loop_removal() {
        let (mut e, h) = Explorer::polygon(1, 0);
        let s = e.peel(h, 0, Third::New);
        e.remove_root_loop().unwrap();
        assert_eq!(e.num_live_holes(), 1);
        assert_eq!(e.hole_len(s.holes[0]), 2);
        let x = e.export();
        assert_eq!(x.tri.map().num_edges(), 1);
        assert!(x.tri.boundaries().is_empty());
    }
}
