//! Peeling diagrams: the decorated genealogy of the holes of an exploration.
//!
//! Vertices are labelled by hole perimeters and created in step order, so
//! every edge points from an older to a newer vertex.

use serde::{Deserialize, Serialize};

use super::PeelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EdgeLabel {
    /// Type I (to a vertex labelled 0) or Type II.
    Plain,
    /// Type IV, towards the left hole.
    Left,
    /// Type IV, towards the right hole.
    Right,
    /// Type III: boundary `j` touched at its vertex `b`.
    Boundary { j: usize, b: usize },
    /// Type V, from the peeled hole; `b` locates the third vertex on the other hole.
    Merge { b: usize },
    /// Type V, from the other hole.
    Partner,
}

impl EdgeLabel {
    fn rank(self) -> u8 {
        match self {
            EdgeLabel::Left => 0,
            EdgeLabel::Plain => 1,
            EdgeLabel::Boundary { .. } => 2,
            EdgeLabel::Merge { .. } => 3,
            EdgeLabel::Partner => 4,
            EdgeLabel::Right => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum StepType {
    I,
    II,
    III { j: usize, b: usize },
    IV { a: usize, b: usize },
    V { b: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub from: usize,
    pub to: usize,
    pub label: EdgeLabel,
}

/// What the out-edges of a vertex say about the step that consumed its hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decoded {
    /// No out-edge: a hole that is still open (or a closed hole, label 0).
    Leaf,
    Closed { child: usize },
    NewVertex { child: usize },
    Boundary { j: usize, b: usize, perimeter: usize, child: usize },
    Split { left: usize, right: usize },
    Merge { b: usize, child: usize, partner: usize },
    /// The other hole of a Type V step.
    Passive { child: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelingDiagram {
    pub labels: Vec<usize>,
    pub edges: Vec<DiagramEdge>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCounts {
    pub i: usize,
    pub ii: usize,
    pub iii: usize,
    pub iv: usize,
    pub v: usize,
}

/// Vertex labels and out-edges in a canonical breadth-first order.
pub type CanonicalDiagram = Vec<(usize, Vec<(EdgeLabel, usize)>)>;

impl PeelingDiagram {
    pub fn new(root_perimeter: usize) -> Self {
        PeelingDiagram { labels: vec![root_perimeter], edges: Vec::new() }
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn add_vertex(&mut self, label: usize) -> usize {
        self.labels.push(label);
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, label: EdgeLabel) {
        self.edges.push(DiagramEdge { from, to, label });
    }

    pub fn out_edges(&self, v: usize) -> Vec<DiagramEdge> {
        let mut out: Vec<DiagramEdge> = self.edges.iter().filter(|e| e.from == v).copied().collect();
        out.sort_by_key(|e| (e.label.rank(), e.to));
        out
    }

    pub fn in_edges(&self, v: usize) -> Vec<DiagramEdge> {
        self.edges.iter().filter(|e| e.to == v).copied().collect()
    }

    fn bad(&self, v: usize, why: &str) -> PeelError {
        PeelError::InconsistentDiagram(format!("vertex {v} (label {}): {why}", self.labels[v]))
    }

    /// Decodes the step recorded at `v`, checking the label transition.
    pub fn decode(&self, v: usize) -> Result<Decoded, PeelError> {
        let l = self.labels[v];
        let out = self.out_edges(v);
        match out.as_slice() {
            [] => Ok(Decoded::Leaf),
            [e] => {
                let c = self.labels[e.to];
                match e.label {
                    EdgeLabel::Plain if l == 2 && c == 0 => Ok(Decoded::Closed { child: e.to }),
                    EdgeLabel::Plain if c == l + 1 => Ok(Decoded::NewVertex { child: e.to }),
                    EdgeLabel::Plain => Err(self.bad(v, "plain edge needs child label 0 or ℓ + 1")),
                    EdgeLabel::Boundary { j, b } => {
                        if c < l + 2 {
                            return Err(self.bad(v, "boundary step needs child label ℓ + p + 1"));
                        }
                        let perimeter = c - l - 1;
                        if b >= perimeter {
                            return Err(self.bad(v, "boundary vertex out of range"));
                        }
                        Ok(Decoded::Boundary { j, b, perimeter, child: e.to })
                    }
                    EdgeLabel::Merge { b } => {
                        let partners: Vec<DiagramEdge> = self
                            .in_edges(e.to)
                            .into_iter()
                            .filter(|x| x.label == EdgeLabel::Partner)
                            .collect();
                        let [p] = partners.as_slice() else {
                            return Err(self.bad(v, "merge without a unique partner"));
                        };
                        let lj = self.labels[p.from];
                        if c != l + lj + 1 {
                            return Err(self.bad(v, "merge needs child label ℓ_i + ℓ_j + 1"));
                        }
                        if b >= lj {
                            return Err(self.bad(v, "merge vertex out of range"));
                        }
                        Ok(Decoded::Merge { b, child: e.to, partner: p.from })
                    }
                    EdgeLabel::Partner => Ok(Decoded::Passive { child: e.to }),
                    EdgeLabel::Left | EdgeLabel::Right => Err(self.bad(v, "split with one child")),
                }
            }
            [a, b] if a.label == EdgeLabel::Left && b.label == EdgeLabel::Right => {
                let (la, lb) = (self.labels[a.to], self.labels[b.to]);
                if la == 0 || lb == 0 || la + lb != l + 1 {
                    return Err(self.bad(v, "split needs a + b = ℓ + 1"));
                }
                Ok(Decoded::Split { left: a.to, right: b.to })
            }
            _ => Err(self.bad(v, "unexpected out-edges")),
        }
    }

    /// Checks every transition.
    pub fn check(&self) -> Result<(), PeelError> {
        for v in 0..self.labels.len() {
            self.decode(v)?;
        }
        for e in &self.edges {
            if e.from >= e.to || e.to >= self.labels.len() {
                return Err(PeelError::InconsistentDiagram(format!("edge {} → {}", e.from, e.to)));
            }
        }
        Ok(())
    }

    pub fn type_counts(&self) -> TypeCounts {
        let mut c = TypeCounts::default();
        for v in 0..self.labels.len() {
            match self.decode(v) {
                Ok(Decoded::Closed { .. }) => c.i += 1,
                Ok(Decoded::NewVertex { .. }) => c.ii += 1,
                Ok(Decoded::Boundary { .. }) => c.iii += 1,
                Ok(Decoded::Split { .. }) => c.iv += 1,
                Ok(Decoded::Merge { .. }) => c.v += 1,
                _ => {}
            }
        }
        c
    }

    pub fn is_tree(&self) -> bool {
        (1..self.labels.len()).all(|v| self.in_edges(v).len() == 1)
    }

    /// Leftmost-path keys: the sequence of `←` (0) / `→` (1) choices along the
    /// leftmost oriented path from the root.
    pub fn left_keys(&self) -> Vec<Vec<u8>> {
        let mut keys: Vec<Option<Vec<u8>>> = vec![None; self.labels.len()];
        keys[0] = Some(Vec::new());
        let mut by_target: Vec<Vec<DiagramEdge>> = vec![Vec::new(); self.labels.len()];
        for e in &self.edges {
            by_target[e.to].push(*e);
        }
        for v in 1..self.labels.len() {
            let mut best: Option<Vec<u8>> = None;
            for e in &by_target[v] {
                let Some(mut k) = keys[e.from].clone() else { continue };
                match e.label {
                    EdgeLabel::Left => k.push(0),
                    EdgeLabel::Right => k.push(1),
                    _ => {}
                }
                if best.as_ref().is_none_or(|b| k < *b) {
                    best = Some(k);
                }
            }
            keys[v] = best;
        }
        keys.into_iter().map(|k| k.unwrap_or_default()).collect()
    }

    /// Breadth-first position of every vertex from the root, out-edges in label order.
    pub fn canonical_ids(&self) -> Vec<usize> {
        let mut id = vec![usize::MAX; self.labels.len()];
        let mut order = vec![0usize];
        id[0] = 0;
        let mut i = 0;
        while i < order.len() {
            for e in self.out_edges(order[i]) {
                if id[e.to] == usize::MAX {
                    id[e.to] = order.len();
                    order.push(e.to);
                }
            }
            i += 1;
        }
        id
    }

    /// Relabelling-free form: vertices in [`Self::canonical_ids`] order.
    pub fn canonical_form(&self) -> CanonicalDiagram {
        let id = self.canonical_ids();
        let mut order: Vec<usize> = (0..self.labels.len()).filter(|&v| id[v] != usize::MAX).collect();
        order.sort_by_key(|&v| id[v]);
        order
            .iter()
            .map(|&v| {
                let out = self.out_edges(v).iter().map(|e| (e.label, id[e.to])).collect();
                (self.labels[v], out)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, PeelError> {
        let d: PeelingDiagram =
            serde_json::from_str(s).map_err(|e| PeelError::InconsistentDiagram(e.to_string()))?;
        d.check()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_labels_are_checked() {
        let mut d = PeelingDiagram::new(4);
        let a = d.add_vertex(2);
        let b = d.add_vertex(3);
        d.add_edge(0, a, EdgeLabel::Left);
        d.add_edge(0, b, EdgeLabel::Right);
        assert!(d.check().is_ok());
        d.labels[b] = 4;
        assert!(matches!(d.check(), Err(PeelError::InconsistentDiagram(_))));
    }

    #[test]
    fn json_round_trip() {
        let mut d = PeelingDiagram::new(2);
        let c = d.add_vertex(0);
        d.add_edge(0, c, EdgeLabel::Plain);
        let e = PeelingDiagram::from_json(&d.to_json()).unwrap();
        assert_eq!(d, e);
        assert_eq!(e.type_counts().i, 1);
    }
}
