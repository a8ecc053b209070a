//! Diagram surgery for explorations whose first step splits the boundary
//! into a left part carrying all the genus and a right part that is a tree.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::diagram::{CanonicalDiagram, Decoded, DiagramEdge, EdgeLabel, PeelingDiagram};
use super::explore::{peel_explore, rebuild, Algorithm};
use super::PeelError;
use crate::tri::TriangulationWithHoles;

/// The two sides of a diagram whose root step is a split.
#[derive(Clone, Debug)]
pub struct RootSplit {
    pub left_root: usize,
    pub right_root: usize,
    pub left: Vec<bool>,
    pub right: Vec<bool>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

/// Components of the diagram without its root, when the root step is a
/// split that disconnects it.
pub fn root_split(d: &PeelingDiagram) -> Option<RootSplit> {
    let Ok(Decoded::Split { left, right }) = d.decode(d.root()) else { return None };
    let n = d.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    for e in &d.edges {
        if e.from != d.root() {
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            parent[a] = b;
        }
    }
    let (cl, cr) = (find(&mut parent, left), find(&mut parent, right));
    if cl == cr {
        return None;
    }
    let side = |c: usize, parent: &mut Vec<usize>| (0..n).map(|v| v != 0 && find(parent, v) == c).collect();
    Some(RootSplit { left_root: left, right_root: right, left: side(cl, &mut parent), right: side(cr, &mut parent) })
}

/// First step splits and disconnects the diagram, and the right part is a
/// tree with more than `r` vertices.
pub fn satisfies_s_r(d: &PeelingDiagram, r: usize) -> bool {
    let Some(rs) = root_split(d) else { return false };
    let size = rs.right.iter().filter(|&&b| b).count();
    let tree = (0..d.num_vertices())
        .filter(|&v| rs.right[v] && v != rs.right_root)
        .all(|v| d.in_edges(v).len() == 1);
    tree && size > r
}

/// Vertices of the leftmost path from the root to `y`, root excluded.
fn leftmost_path(d: &PeelingDiagram, y: usize) -> Vec<usize> {
    let keys = d.left_keys();
    let mut path = vec![y];
    let mut v = y;
    while v != d.root() {
        let prev = d
            .in_edges(v)
            .into_iter()
            .find(|e| {
                let mut k = keys[e.from].clone();
                match e.label {
                    EdgeLabel::Left => k.push(0),
                    EdgeLabel::Right => k.push(1),
                    _ => {}
                }
                k == keys[v]
            })
            .expect("every vertex is reachable");
        v = prev.from;
        path.push(v);
    }
    path.pop();
    path.reverse();
    path
}

/// Renumbers vertices so that edges go from smaller to larger ids.
fn topological(labels: Vec<usize>, edges: Vec<DiagramEdge>, root: usize) -> (PeelingDiagram, Vec<usize>) {
    let n = labels.len();
    let mut indeg = vec![0usize; n];
    for e in &edges {
        indeg[e.to] += 1;
    }
    let mut ready = BTreeSet::from([root]);
    let mut new_id = vec![usize::MAX; n];
    let mut next = 0;
    while let Some(v) = ready.pop_first() {
        new_id[v] = next;
        next += 1;
        for e in edges.iter().filter(|e| e.from == v) {
            indeg[e.to] -= 1;
            if indeg[e.to] == 0 {
                ready.insert(e.to);
            }
        }
    }
    let mut out = PeelingDiagram { labels: vec![0; next], edges: Vec::new() };
    for v in 0..n {
        if new_id[v] != usize::MAX {
            out.labels[new_id[v]] = labels[v];
        }
    }
    for e in edges {
        if new_id[e.from] != usize::MAX && new_id[e.to] != usize::MAX {
            out.add_edge(new_id[e.from], new_id[e.to], e.label);
        }
    }
    (out, new_id)
}

/// Moves the right part of the root split below `y`, a Type V vertex of the
/// left part. Returns the new diagram and the new id of `x`.
pub fn diagram_surgery(d: &PeelingDiagram, x: usize, y: usize) -> Result<(PeelingDiagram, usize), PeelError> {
    let rs = root_split(d).ok_or_else(|| PeelError::Precondition("the root step does not disconnect".into()))?;
    if !rs.right.get(x).copied().unwrap_or(false) {
        return Err(PeelError::Precondition(format!("{x} is not in the right part")));
    }
    if !rs.left.get(y).copied().unwrap_or(false) {
        return Err(PeelError::Precondition(format!("{y} is not in the left part")));
    }
    let Decoded::Merge { b: s, child: z, .. } = d.decode(y)? else {
        return Err(PeelError::Precondition(format!("{y} is not a Type V vertex")));
    };
    let k = d.label(rs.right_root) - 1;
    let mut labels = d.labels.clone();
    for v in leftmost_path(d, y) {
        labels[v] += k;
    }
    let w = labels.len();
    labels.push(d.label(y));
    let mut edges: Vec<DiagramEdge> = d
        .edges
        .iter()
        .filter(|e| e.from != d.root() && !(e.from == y && e.to == z))
        .copied()
        .collect();
    edges.push(DiagramEdge { from: y, to: rs.right_root, label: EdgeLabel::Left });
    edges.push(DiagramEdge { from: y, to: w, label: EdgeLabel::Right });
    edges.push(DiagramEdge { from: w, to: z, label: EdgeLabel::Merge { b: s } });
    let (out, ids) = topological(labels, edges, rs.left_root);
    out.check()?;
    Ok((out, ids[x]))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub triangulations: usize,
    pub satisfying: usize,
    /// Triples `(t, x, y)` fed to the surgery.
    pub inputs: usize,
    pub distinct_outputs: usize,
    /// Outputs that rebuild into a triangulation with the same perimeters,
    /// genus and number of internal vertices.
    pub rebuilt: usize,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.inputs == self.distinct_outputs
    }
}

/// Runs the surgery on every admissible triple of the corpus, under the
/// leftmost-path algorithm.
pub fn surgery_injectivity(corpus: &[TriangulationWithHoles], r: usize) -> Result<InjectivityReport, PeelError> {
    let mut rep = InjectivityReport { triangulations: corpus.len(), ..Default::default() };
    let mut seen: HashSet<(CanonicalDiagram, usize)> = HashSet::new();
    for t in corpus {
        let d = peel_explore(t, &Algorithm::Left)?.diagram;
        if !satisfies_s_r(&d, r) {
            continue;
        }
        rep.satisfying += 1;
        let rs = root_split(&d).unwrap();
        let ys: Vec<usize> = (0..d.num_vertices())
            .filter(|&v| rs.left[v] && matches!(d.decode(v), Ok(Decoded::Merge { .. })))
            .collect();
        for &y in &ys {
            for x in (0..d.num_vertices()).filter(|&v| rs.right[v]) {
                let (dt, xt) = diagram_surgery(&d, x, y)?;
                rep.inputs += 1;
                if let Ok(tt) = rebuild(&dt, &Algorithm::Left) {
                    let same = tt.boundary_perimeters() == t.boundary_perimeters()
                        && tt.genus() == t.genus()
                        && tt.num_internal_vertices() == t.num_internal_vertices();
                    rep.rebuilt += usize::from(same);
                }
                let ids = dt.canonical_ids();
                seen.insert((dt.canonical_form(), ids[xt]));
            }
        }
    }
    rep.distinct_outputs = seen.len();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_rooted, GluingSpec};

    #[test]
    fn surgery_keeps_labels_consistent_and_is_injective() {
        let mut corpus = Vec::new();
        for (t, p) in [(3, 1), (4, 2), (5, 3), (6, 4)] {
            corpus.extend(enumerate_rooted(&GluingSpec::with_boundaries(t, vec![p], Some(1))).unwrap().maps);
        }
        let rep = surgery_injectivity(&corpus, 1).unwrap();
        assert!(rep.inputs > 0);
        assert!(rep.injective(), "{rep:?}");
        assert_eq!(rep.rebuilt, rep.inputs);
    }
}
