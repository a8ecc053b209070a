//! Persistent table of exact counts with per-entry provenance.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::gj::GjRecursion;
use super::krikun::tau_planar_polygon;
use super::EnumError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Formula,
    Recursion,
    Oracle,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Formula => "formula",
            Provenance::Recursion => "recursion",
            Provenance::Oracle => "oracle",
        })
    }
}

/// `(n, g, perimeters)`; closed surfaces use an empty perimeter list.
pub type CountKey = (i64, usize, Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountEntry {
    pub n: i64,
    pub g: usize,
    pub p: Vec<u64>,
    /// Decimal string: counts overflow every fixed-width integer.
    pub count: String,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    schema_version: u32,
    entries: Vec<CountEntry>,
}

/// Ownership makes writes single-writer; share behind an `RwLock` for
/// concurrent readers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountTable {
    entries: BTreeMap<CountKey, (BigInt, Provenance)>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: i64, g: usize, p: &[u64]) -> Option<(&BigInt, Provenance)> {
        self.entries.get(&(n, g, p.to_vec())).map(|(c, pr)| (c, *pr))
    }

    /// Inserts a value; a second value for the same key must agree exactly.
    pub fn insert(
        &mut self,
        n: i64,
        g: usize,
        p: Vec<u64>,
        count: BigInt,
        provenance: Provenance,
    ) -> Result<(), EnumError> {
        if count < BigInt::from(0) {
            return Err(EnumError::Domain(format!("negative count at ({n}, {g}, {p:?})")));
        }
        match self.entries.get(&(n, g, p.clone())) {
            Some((old, _)) if *old != count => Err(EnumError::Domain(format!(
                "conflicting counts {old} and {count} at ({n}, {g}, {p:?})"
            ))),
            Some(_) => Ok(()),
            None => {
                self.entries.insert((n, g, p), (count, provenance));
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> Vec<CountEntry> {
        self.entries
            .iter()
            .map(|((n, g, p), (c, pr))| CountEntry {
                n: *n,
                g: *g,
                p: p.clone(),
                count: c.to_string(),
                provenance: *pr,
            })
            .collect()
    }

    /// Fills closed counts `τ(n, g)` for `0 ≤ n ≤ max_n` and planar polygon
    /// counts `τ_p(n, 0)` for `p ≤ max_p`.
    pub fn fill(
        &mut self,
        gj: &mut GjRecursion,
        max_n: i64,
        max_g: usize,
        max_p: u64,
    ) -> Result<(), EnumError> {
        for g in 0..=max_g {
            for n in 0..=max_n {
                if n >= 2 * g as i64 - 1 {
                    self.insert(n, g, vec![], gj.tau(n, g)?, Provenance::Recursion)?;
                }
            }
        }
        for p in 1..=max_p {
            for n in (p as i64 - 2)..=max_n {
                self.insert(n, 0, vec![p], tau_planar_polygon(n, p)?, Provenance::Formula)?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let f = TableFile { schema_version: SCHEMA_VERSION, entries: self.entries() };
        serde_json::to_string_pretty(&f).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, EnumError> {
        let f: TableFile = serde_json::from_str(s).map_err(|e| EnumError::Io(e.to_string()))?;
        if f.schema_version != SCHEMA_VERSION {
            return Err(EnumError::Io(format!("unsupported schema version {}", f.schema_version)));
        }
        let mut t = CountTable::new();
        for e in f.entries {
            let c = BigInt::from_str(&e.count).map_err(|e| EnumError::Io(e.to_string()))?;
            t.insert(e.n, e.g, e.p, c, e.provenance)?;
        }
        Ok(t)
    }

    pub fn save(&self, path: &Path) -> Result<(), EnumError> {
        std::fs::write(path, self.to_json()).map_err(|e| EnumError::Io(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, EnumError> {
        let s = std::fs::read_to_string(path).map_err(|e| EnumError::Io(e.to_string()))?;
        Self::from_json(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_conflicts() {
        let mut gj = GjRecursion::seeded(&BigInt::from(4)).unwrap();
        let mut t = CountTable::new();
        t.fill(&mut gj, 8, 2, 4).unwrap();
        let u = CountTable::from_json(&t.to_json()).unwrap();
        assert_eq!(t, u);
        assert!(t.insert(1, 0, vec![], BigInt::from(5), Provenance::Oracle).is_err());
        assert!(t.insert(1, 0, vec![], BigInt::from(4), Provenance::Oracle).is_ok());
        assert_eq!(t.get(1, 0, &[]).unwrap().1, Provenance::Recursion);
    }
}
