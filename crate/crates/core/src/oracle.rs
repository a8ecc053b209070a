//! Exhaustive generation of small triangulations and exact laws derived from them.
//!
//! Gluings are generated in canonical order: polygons receive half-edge ids
//! when first reached, starting at the side through which they were entered
//! and continuing in `phi` order. The smallest unglued half-edge is always
//! glued next, either to a later unglued side or to the entry side of a newly
//! discovered polygon. A rooted map determines this sequence uniquely, so each
//! rooted triangulation occurs exactly once; deduplication by canonical code
//! is kept as a check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{ball, dual_ball};
use crate::code::RootedCode;
use crate::enumeration::LambdaParams;
use crate::explorer::{Explorer, Third};
use crate::map::HalfEdgeMap;
use crate::tri::TriangulationWithHoles;

pub const DEFAULT_CAP: usize = 6;
/// Triangle cap for the planar polygon generator, which is far cheaper.
pub const PLANAR_CAP: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{requested} triangles exceed the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("invalid gluing spec: {0}")]
    Domain(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSpec {
    pub triangles: usize,
    pub boundaries: Vec<usize>,
    pub genus: Option<usize>,
    pub cap: usize,
}

impl GluingSpec {
    pub fn closed(triangles: usize, genus: Option<usize>) -> Self {
        GluingSpec { triangles, boundaries: vec![], genus, cap: DEFAULT_CAP }
    }

    pub fn with_boundaries(triangles: usize, boundaries: Vec<usize>, genus: Option<usize>) -> Self {
        GluingSpec { triangles, boundaries, genus, cap: DEFAULT_CAP }
    }

    /// The gluing spec realising `T_p(n, g)`: `2n − Σ(p_i − 2)` triangles.
    pub fn for_size(n: i64, g: usize, boundaries: Vec<usize>) -> Result<Self, OracleError> {
        let s: i64 = boundaries.iter().map(|&p| p as i64 - 2).sum();
        let t = 2 * n - s;
        if t < 0 {
            return Err(OracleError::Domain(format!("negative triangle count for n = {n}")));
        }
        Ok(Self::with_boundaries(t as usize, boundaries, Some(g)))
    }

    fn check(&self) -> Result<(), OracleError> {
        if self.triangles > self.cap {
            return Err(OracleError::CapExceeded { requested: self.triangles, cap: self.cap });
        }
        if self.boundaries.contains(&0) {
            return Err(OracleError::Domain("boundary perimeters must be positive".into()));
        }
        let sides = 3 * self.triangles + self.boundaries.iter().sum::<usize>();
        if sides % 2 == 1 {
            return Err(OracleError::Domain(format!("{sides} polygon sides cannot be paired")));
        }
        if sides == 0 {
            return Err(OracleError::Domain("at least one polygon is needed".into()));
        }
        Ok(())
    }
}

#[derive(Clone)]
struct Gluer<'a> {
    spec: &'a GluingSpec,
    phi: Vec<usize>,
    alpha: Vec<usize>,
    len: usize,
    triangles: usize,
    used: Vec<bool>,
    roots: Vec<usize>,
}

const FREE: usize = usize::MAX;

#[derive(Clone, Copy, Debug)]
enum Action {
    Side(usize),
    Triangle,
    Boundary(usize, usize),
}

impl<'a> Gluer<'a> {
    fn new(spec: &'a GluingSpec) -> Self {
        let total = 3 * spec.triangles + spec.boundaries.iter().sum::<usize>();
        let mut g = Gluer {
            spec,
            phi: vec![FREE; total],
            alpha: vec![FREE; total],
            len: 0,
            triangles: 0,
            used: vec![false; spec.boundaries.len()],
            roots: vec![FREE; spec.boundaries.len()],
        };
        if spec.boundaries.is_empty() {
            g.open_polygon(3);
            g.triangles = 1;
        } else {
            g.open_polygon(spec.boundaries[0]);
            g.used[0] = true;
            g.roots[0] = 0;
        }
        g
    }

    fn open_polygon(&mut self, k: usize) -> usize {
        let s = self.len;
        for i in 0..k {
            self.phi[s + i] = s + (i + 1) % k;
        }
        self.len += k;
        s
    }

    fn close_polygon(&mut self, k: usize) {
        self.len -= k;
        for i in 0..k {
            self.phi[self.len + i] = FREE;
        }
    }

    fn first_free(&self, from: usize) -> usize {
        (from..self.len).find(|&h| self.alpha[h] == FREE).unwrap_or(self.len)
    }

    fn actions(&self, h: usize) -> Vec<Action> {
        let mut out: Vec<Action> =
            (h + 1..self.len).filter(|&x| self.alpha[x] == FREE).map(Action::Side).collect();
        if self.triangles < self.spec.triangles {
            out.push(Action::Triangle);
        }
        for (j, &p) in self.spec.boundaries.iter().enumerate() {
            if !self.used[j] {
                out.extend((0..p).map(|m| Action::Boundary(j, m)));
            }
        }
        out
    }

    fn glue(&mut self, a: usize, b: usize) {
        self.alpha[a] = b;
        self.alpha[b] = a;
    }

    fn apply<F: FnMut(&Gluer)>(&mut self, h: usize, act: Action, leaf: &mut F) {
        match act {
            Action::Side(x) => {
                self.glue(h, x);
                self.run(h + 1, leaf);
                self.alpha[h] = FREE;
                self.alpha[x] = FREE;
            }
            Action::Triangle => {
                let s = self.open_polygon(3);
                self.triangles += 1;
                self.glue(h, s);
                self.run(h + 1, leaf);
                self.alpha[h] = FREE;
                self.alpha[s] = FREE;
                self.triangles -= 1;
                self.close_polygon(3);
            }
            Action::Boundary(j, m) => {
                let p = self.spec.boundaries[j];
                let s = self.open_polygon(p);
                self.used[j] = true;
                self.roots[j] = s + (p - m) % p;
                self.glue(h, s);
                self.run(h + 1, leaf);
                self.alpha[h] = FREE;
                self.alpha[s] = FREE;
                self.used[j] = false;
                self.roots[j] = FREE;
                self.close_polygon(p);
            }
        }
    }

    fn run<F: FnMut(&Gluer)>(&mut self, from: usize, leaf: &mut F) {
        let h = self.first_free(from);
        if h == self.len {
            if self.triangles == self.spec.triangles && self.used.iter().all(|&u| u) {
                leaf(self);
            }
            return;
        }
        for act in self.actions(h) {
            self.apply(h, act, leaf);
        }
    }

    fn genus(&self) -> Option<usize> {
        let n = self.len;
        let mut seen = vec![false; n];
        let mut v = 0i64;
        for h in 0..n {
            if seen[h] {
                continue;
            }
            v += 1;
            let mut x = h;
            while !seen[x] {
                seen[x] = true;
                x = self.phi[self.alpha[x]];
            }
        }
        let e = (n / 2) as i64;
        let f = (self.spec.triangles + self.spec.boundaries.len()) as i64;
        let chi = v - e + f;
        (chi <= 2 && chi % 2 == 0).then_some(((2 - chi) / 2) as usize)
    }

    fn build(&self) -> TriangulationWithHoles {
        let map = HalfEdgeMap::from_faces(self.phi.clone(), self.alpha.clone(), 0)
            .expect("complete gluing is a connected map");
        TriangulationWithHoles::new(map, &self.roots, vec![]).expect("ids in range")
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Sorted by canonical code.
    pub maps: Vec<TriangulationWithHoles>,
    /// Complete gluings visited, before genus and validity filters.
    pub gluings: u64,
    /// Gluings rejected by the validity filter.
    pub invalid: u64,
    /// Duplicate canonical codes removed (zero when generation is canonical).
    pub duplicates: u64,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

fn collect(spec: &GluingSpec) -> (Vec<TriangulationWithHoles>, u64, u64) {
    let mut root = Gluer::new(spec);
    let h = root.first_free(0);
    if h == root.len {
        let t = root.build();
        let ok = t.validate().is_ok() && spec.genus.is_none_or(|g| g == t.genus());
        return (if ok { vec![t] } else { vec![] }, 1, u64::from(!ok));
    }
    let actions = root.actions(h);
    let parts: Vec<(Vec<TriangulationWithHoles>, u64, u64)> = actions
        .par_iter()
        .map(|&act| {
            let mut g = root.clone();
            let mut maps = Vec::new();
            let (mut count, mut invalid) = (0u64, 0u64);
            g.apply(h, act, &mut |leaf: &Gluer| {
                count += 1;
                if spec.genus.is_some_and(|want| leaf.genus() != Some(want)) {
                    return;
                }
                let t = leaf.build();
                if t.validate().is_ok() {
                    maps.push(t);
                } else {
                    invalid += 1;
                }
            });
            (maps, count, invalid)
        })
        .collect();
    let _ = &mut root;
    let mut maps = Vec::new();
    let (mut count, mut invalid) = (0, 0);
    for (m, c, i) in parts {
        maps.extend(m);
        count += c;
        invalid += i;
    }
    (maps, count, invalid)
}

/// All rooted triangulations with the given polygons, one per rooted class.
pub fn enumerate_rooted(spec: &GluingSpec) -> Result<Enumeration, OracleError> {
    spec.check()?;
    let (maps, gluings, invalid) = collect(spec);
    Ok(dedup(maps, gluings, invalid))
}

fn dedup(maps: Vec<TriangulationWithHoles>, gluings: u64, invalid: u64) -> Enumeration {
    let total = maps.len() as u64;
    let mut by_code = BTreeMap::new();
    for t in maps {
        by_code.entry(t.code()).or_insert(t);
    }
    let maps: Vec<_> = by_code.into_values().collect();
    let duplicates = total - maps.len() as u64;
    Enumeration { maps, gluings, invalid, duplicates }
}

/// Planar triangulations of the `p`-gon with exactly `internal` internal
/// vertices, generated by the peeling decomposition instead of gluings.
pub fn enumerate_planar_polygon(p: usize, internal: usize) -> Result<Enumeration, OracleError> {
    if p == 0 {
        return Err(OracleError::Domain("perimeter must be positive".into()));
    }
    // a 1-gon without internal vertices cannot be triangulated
    let Some(triangles) = (2 * internal + p).checked_sub(2).filter(|_| p > 1 || internal > 0)
    else {
        return Ok(Enumeration { maps: vec![], gluings: 0, invalid: 0, duplicates: 0 });
    };
    if triangles > PLANAR_CAP {
        return Err(OracleError::CapExceeded { requested: triangles, cap: PLANAR_CAP });
    }
    let (e, h) = Explorer::polygon(p, 0);
    let mut out = Vec::new();
    planar_rec(e, vec![h], internal, &mut out);
    let n = out.len() as u64;
    Ok(dedup(out, n, 0))
}

fn planar_rec(e: Explorer, mut holes: Vec<usize>, budget: usize, out: &mut Vec<TriangulationWithHoles>) {
    let ones = holes.iter().filter(|&&h| e.hole_len(h) == 1).count();
    if ones > budget {
        return;
    }
    let Some(h) = holes.pop() else {
        if budget == 0 {
            out.push(e.export().tri);
        }
        return;
    };
    let q = e.hole_len(h);
    if q == 2 {
        let mut f = e.clone();
        f.close_two_gon(h);
        planar_rec(f, holes.clone(), budget, out);
    }
    if budget > 0 {
        let mut f = e.clone();
        let s = f.peel(h, 0, Third::New);
        let mut hs = holes.clone();
        hs.extend(s.holes);
        planar_rec(f, hs, budget - 1, out);
    }
    for j in 0..q {
        let mut f = e.clone();
        let s = f.peel(h, 0, Third::SameHole(j));
        let mut hs = holes.clone();
        hs.extend(s.holes);
        planar_rec(f, hs, budget, out);
    }
}

/// `P(t) = λ^{|t_in|} / w(p)` over planar triangulations with at most `n_max` internal vertices.
pub fn exact_boltzmann_law(
    p: usize,
    params: &LambdaParams,
    n_max: usize,
) -> Result<Vec<(TriangulationWithHoles, usize, f64)>, OracleError> {
    let w = params.w(p);
    let mut out = Vec::new();
    for v in 0..=n_max {
        for t in enumerate_planar_polygon(p, v)?.maps {
            out.push((t, v, params.lambda.powi(v as i32) / w));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rooting {
    UniformEdge,
    UniformBoundaryEdge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallKind {
    Metric,
    Dual,
}

/// Oriented edges eligible as roots; boundary edges are taken with the boundary on their right.
pub fn root_candidates(t: &TriangulationWithHoles, rooting: Rooting) -> Vec<usize> {
    let m = t.map();
    match rooting {
        Rooting::UniformEdge => (0..m.num_half_edges()).collect(),
        Rooting::UniformBoundaryEdge => {
            t.boundaries().iter().flat_map(|b| m.face_half_edges(b.face)).collect()
        }
    }
}

pub fn rerooted(t: &TriangulationWithHoles, root: usize) -> TriangulationWithHoles {
    let map = t.map().with_root(root).expect("root in range");
    let edges: Vec<usize> = t.boundaries().iter().map(|b| b.edge).collect();
    TriangulationWithHoles::new(map, &edges, t.holes().to_vec()).expect("ids in range")
}

pub fn ball_code(t: &TriangulationWithHoles, r: usize, kind: BallKind) -> RootedCode {
    match kind {
        BallKind::Metric => ball(t.map(), r, None).code(),
        BallKind::Dual => dual_ball(t, r).code(),
    }
}

/// Exact law of the ball around a uniform root of a uniform element of `corpus`.
pub fn exact_ball_distribution(
    corpus: &[TriangulationWithHoles],
    r: usize,
    rooting: Rooting,
    kind: BallKind,
) -> BTreeMap<RootedCode, BigRational> {
    let mut law: BTreeMap<RootedCode, BigRational> = BTreeMap::new();
    if corpus.is_empty() {
        return law;
    }
    let parts: Vec<BTreeMap<RootedCode, BigRational>> = corpus
        .par_iter()
        .map(|t| {
            let roots = root_candidates(t, rooting);
            let weight = BigRational::new(
                BigInt::one(),
                BigInt::from(corpus.len()) * BigInt::from(roots.len().max(1)),
            );
            let mut local: BTreeMap<RootedCode, BigRational> = BTreeMap::new();
            for h in roots {
                let code = ball_code(&rerooted(t, h), r, kind);
                *local.entry(code).or_insert_with(BigRational::zero) += &weight;
            }
            local
        })
        .collect();
    for part in parts {
        for (c, p) in part {
            *law.entry(c).or_insert_with(BigRational::zero) += p;
        }
    }
    law
}

/// Newline-delimited JSON, one map per line with its canonical code.
pub fn corpus_ndjson(maps: &[TriangulationWithHoles]) -> String {
    let mut rows: Vec<(RootedCode, String)> = maps.iter().map(|t| (t.code(), t.to_json())).collect();
    rows.sort();
    let mut s = String::new();
    for (code, json) in rows {
        let v = serde_json::json!({ "code": code.0, "map": serde_json::from_str::<serde_json::Value>(&json).unwrap() });
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{tau_planar_polygon, LAMBDA_C};
    use num_traits::ToPrimitive;

    #[test]
    fn two_triangle_spheres() {
        let e = enumerate_rooted(&GluingSpec::closed(2, Some(0))).unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e.duplicates, 0);
    }

    #[test]
    fn odd_sides_rejected() {
        assert!(matches!(
            enumerate_rooted(&GluingSpec::closed(1, None)),
            Err(OracleError::Domain(_))
        ));
        assert!(matches!(
            enumerate_rooted(&GluingSpec::closed(8, None)),
            Err(OracleError::CapExceeded { .. })
        ));
    }

    #[test]
    fn one_gon_with_one_triangle() {
        let e = enumerate_rooted(&GluingSpec::with_boundaries(1, vec![1], Some(0))).unwrap();
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn planar_generator_agrees_with_gluings() {
        for p in 1..=5usize {
            for v in 0..=2usize {
                let t = 2 * v + p;
                if t < 2 || t - 2 > 5 {
                    continue;
                }
                let a = enumerate_planar_polygon(p, v).unwrap();
                let b = enumerate_rooted(&GluingSpec::with_boundaries(t - 2, vec![p], Some(0)))
                    .unwrap();
                let ca: Vec<_> = a.maps.iter().map(|t| t.code()).collect();
                let cb: Vec<_> = b.maps.iter().map(|t| t.code()).collect();
                assert_eq!(ca, cb, "p = {p}, v = {v}");
                let n = (v + p - 2) as i64;
                assert_eq!(BigInt::from(a.len()), tau_planar_polygon(n, p as u64).unwrap());
            }
        }
    }

    #[test]
    fn degenerate_two_gon_mass() {
        let pa = LambdaParams::from_lambda(LAMBDA_C / 2.0).unwrap();
        let law = exact_boltzmann_law(2, &pa, 0).unwrap();
        assert_eq!(law.len(), 1);
        assert_eq!(law[0].0.num_triangles(), 0);
        assert!((law[0].2 - 1.0 / pa.w(2)).abs() < 1e-15);
    }

    #[test]
    fn ball_law_total_mass_is_one() {
        let e = enumerate_rooted(&GluingSpec::with_boundaries(3, vec![3], Some(0))).unwrap();
        for r in 0..3 {
            let law = exact_ball_distribution(&e.maps, r, Rooting::UniformBoundaryEdge, BallKind::Metric);
            let total: BigRational = law.values().sum();
            assert!(total.is_one());
            if r == 0 {
                assert_eq!(law.len(), 1);
            }
        }
        let _ = BigRational::zero().to_f64();
    }
}
