//! Canonical codes for rooted maps.
//!
//! Half-edges are relabelled in breadth-first order from the root, exploring
//! `sigma` before `alpha`. In an orientable rooted map this order is fixed by
//! the rooted isomorphism class, so the sequence of relabelled `(sigma, alpha)`
//! pairs is a complete invariant.

use serde::{Deserialize, Serialize};

use crate::map::HalfEdgeMap;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootedCode(pub Vec<u32>);

impl RootedCode {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

/// Breadth-first label of every half-edge; the root gets label 0.
pub fn canonical_labels(m: &HalfEdgeMap) -> Vec<u32> {
    let n = m.num_half_edges();
    let mut label = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[m.root()] = 0;
    order.push(m.root());
    let mut i = 0;
    while i < order.len() {
        let h = order[i];
        i += 1;
        for x in [m.sigma(h), m.alpha(h)] {
            if label[x] == u32::MAX {
                label[x] = order.len() as u32;
                order.push(x);
            }
        }
    }
    label
}

/// Half-edges listed in canonical label order.
pub fn canonical_order(m: &HalfEdgeMap) -> Vec<usize> {
    let label = canonical_labels(m);
    let mut order = vec![0; label.len()];
    for (h, &l) in label.iter().enumerate() {
        order[l as usize] = h;
    }
    order
}

pub fn canonical_code(m: &HalfEdgeMap) -> RootedCode {
    let label = canonical_labels(m);
    let order = canonical_order(m);
    let mut code = Vec::with_capacity(1 + 2 * order.len());
    code.push(order.len() as u32);
    for &h in &order {
        code.push(label[m.sigma(h)]);
        code.push(label[m.alpha(h)]);
    }
    RootedCode(code)
}

/// Rebuilds the canonical representative encoded by [`canonical_code`].
pub fn decode(code: &RootedCode) -> Option<HalfEdgeMap> {
    let c = code.as_slice();
    let n = *c.first()? as usize;
    if c.len() != 1 + 2 * n {
        return None;
    }
    let sigma = (0..n).map(|i| c[1 + 2 * i] as usize).collect();
    let alpha = (0..n).map(|i| c[2 + 2 * i] as usize).collect();
    HalfEdgeMap::new(sigma, alpha, 0).ok()
}

pub fn rooted_isomorphic(a: &HalfEdgeMap, b: &HalfEdgeMap) -> bool {
    a.num_half_edges() == b.num_half_edges() && canonical_code(a) == canonical_code(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arbitrary_map(n_edges: usize, seed: Vec<usize>) -> Option<HalfEdgeMap> {
        let n = 2 * n_edges;
        let mut perm: Vec<usize> = (0..n).collect();
        for (i, s) in seed.iter().enumerate().take(n) {
            let j = i + s % (n - i);
            perm.swap(i, j);
        }
        let alpha: Vec<usize> = (0..n).map(|h| h ^ 1).collect();
        HalfEdgeMap::new(perm, alpha, 0).ok()
    }

    proptest! {
        #[test]
        fn code_is_relabelling_invariant(
            e in 1usize..7,
            seed in proptest::collection::vec(0usize..1000, 14),
            shuffle in proptest::collection::vec(0usize..1000, 14),
        ) {
            if let Some(m) = arbitrary_map(e, seed) {
                let n = m.num_half_edges();
                let mut perm: Vec<usize> = (0..n).collect();
                for (i, s) in shuffle.iter().enumerate().take(n) {
                    let j = i + s % (n - i);
                    perm.swap(i, j);
                }
                let r = m.relabel(&perm).unwrap();
                prop_assert_eq!(canonical_code(&m), canonical_code(&r));
                let d = decode(&canonical_code(&m)).unwrap();
                prop_assert_eq!(canonical_code(&d), canonical_code(&m));
                prop_assert_eq!(d.genus(), m.genus());
            }
        }
    }

    #[test]
    fn rerooting_distinguishes_asymmetric_roots() {
        // a path with two edges: the root on the end edge differs from the middle
        let sigma = vec![0, 2, 1, 3];
        let alpha = vec![1, 0, 3, 2];
        let m = HalfEdgeMap::new(sigma, alpha, 0).unwrap();
        let r = m.with_root(1).unwrap();
        assert_ne!(canonical_code(&m), canonical_code(&r));
        let r3 = m.with_root(3).unwrap();
        assert_eq!(canonical_code(&m), canonical_code(&r3));
    }
}
