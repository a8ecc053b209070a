//! Uniform triangulations of small instances, drawn from the exhaustive corpus.

use rand::Rng;

use super::rng::SamplerRng;
use crate::oracle::{
    enumerate_planar_polygon, enumerate_rooted, rerooted, root_candidates, GluingSpec,
    OracleError, Rooting,
};
use crate::tri::TriangulationWithHoles;

/// All rooted triangulations of `𝒯_𝐩(n, g)`.
#[derive(Clone, Debug)]
pub struct UniformCorpus {
    pub n: i64,
    pub g: usize,
    pub perimeters: Vec<usize>,
    pub maps: Vec<TriangulationWithHoles>,
}

impl UniformCorpus {
    /// Planar one-boundary instances use the peeling generator, which reaches
    /// larger sizes; everything else uses the gluing enumeration.
    pub fn new(n: i64, g: usize, perimeters: Vec<usize>) -> Result<Self, OracleError> {
        let spec = GluingSpec::for_size(n, g, perimeters.clone())?;
        let maps = if g == 0 && perimeters.len() == 1 {
            let p = perimeters[0];
            let internal = (spec.triangles + 2)
                .checked_sub(p)
                .filter(|x| x % 2 == 0)
                .ok_or_else(|| OracleError::Domain(format!("no triangulation of size {n}")))?
                / 2;
            enumerate_planar_polygon(p, internal)?.maps
        } else {
            enumerate_rooted(&spec)?.maps
        };
        Ok(UniformCorpus { n, g, perimeters, maps })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn sample<'a>(&'a self, rng: &mut SamplerRng) -> Option<&'a TriangulationWithHoles> {
        if self.maps.is_empty() {
            return None;
        }
        Some(&self.maps[rng.random_range(0..self.maps.len())])
    }

    /// A uniform element rerooted at a uniform candidate edge.
    pub fn sample_rooted(&self, rng: &mut SamplerRng, rooting: Rooting) -> Option<TriangulationWithHoles> {
        let t = self.sample(rng)?;
        let c = root_candidates(t, rooting);
        if c.is_empty() {
            return Some(t.clone());
        }
        Some(rerooted(t, c[rng.random_range(0..c.len())]))
    }
}

/// One uniform draw from `𝒯_𝐩(n, g)` (builds the corpus; reuse
/// [`UniformCorpus`] for repeated draws).
pub fn sample_uniform_small(
    n: i64,
    g: usize,
    perimeters: Vec<usize>,
    rng: &mut SamplerRng,
) -> Result<Option<TriangulationWithHoles>, OracleError> {
    Ok(UniformCorpus::new(n, g, perimeters)?.sample(rng).cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::rng::stream;

    #[test]
    fn draws_cover_the_corpus() {
        let c = UniformCorpus::new(2, 0, vec![3]).unwrap();
        let want = crate::enumeration::tau_planar_polygon(2, 3).unwrap();
        assert_eq!(num_bigint::BigInt::from(c.len()), want);
        let mut rng = stream(5, 0);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..200 {
            seen.insert(c.sample(&mut rng).unwrap().code());
        }
        assert_eq!(seen.len(), c.len());
    }

    #[test]
    fn cap_is_reported() {
        let mut rng = stream(5, 0);
        assert!(matches!(
            sample_uniform_small(6, 1, vec![], &mut rng),
            Err(OracleError::CapExceeded { .. })
        ));
    }
}
