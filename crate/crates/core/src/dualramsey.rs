//! Finite dual-Ramsey search.
//!
//! Given a coloring of the rigid surjections `[n] → [k]`, look for a rigid
//! `p: [n] → [m]` such that every composite `r ∘ p` with `r: [m] → [k]`
//! rigid gets the same color.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rigidsurj::{enumerate_rigid, FiniteRigidSurjection};

/// A total coloring of `enumerate_rigid(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringTable {
    n: usize,
    k: usize,
    colors: BTreeMap<FiniteRigidSurjection, usize>,
}

impl ColoringTable {
    /// Checks that `colors` covers exactly the rigid surjections `[n] → [k]`.
    pub fn new(n: usize, k: usize, colors: BTreeMap<FiniteRigidSurjection, usize>) -> Result<Self> {
        let domain = enumerate_rigid(n, k)?;
        if let Some(f) = domain.iter().find(|f| !colors.contains_key(f)) {
            return Err(Error::domain(format!("coloring is missing {f:?}")));
        }
        if colors.len() != domain.len() {
            return Err(Error::domain(format!("coloring has entries outside the rigid surjections [{n}] -> [{k}]")));
        }
        Ok(ColoringTable { n, k, colors })
    }

    /// Builds a table from a color rule.
    pub fn from_fn<F>(n: usize, k: usize, mut rule: F) -> Result<Self>
    where
        F: FnMut(&FiniteRigidSurjection) -> usize,
    {
        let colors = enumerate_rigid(n, k)?.into_iter().map(|f| {
            let c = rule(&f);
            (f, c)
        });
        Ok(ColoringTable { n, k, colors: colors.collect() })
    }

    /// `color(f) = f(position) mod modulus`.
    pub fn position_mod(n: usize, k: usize, position: usize, modulus: usize) -> Result<Self> {
        if position >= n {
            return Err(Error::domain(format!("position {position} is outside [{n}]")));
        }
        if modulus == 0 {
            return Err(Error::domain("modulus must be positive"));
        }
        Self::from_fn(n, k, |f| f.eval(position) % modulus)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color(&self, f: &FiniteRigidSurjection) -> Option<usize> {
        self.colors.get(f).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FiniteRigidSurjection, usize)> {
        self.colors.iter().map(|(f, &c)| (f, c))
    }

    pub fn color_count(&self) -> usize {
        self.colors.values().max().map_or(0, |c| c + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonochromaticWitness {
    pub p: FiniteRigidSurjection,
    pub color: usize,
}

/// The single color of `{r ∘ p}`, or `None` at the first mismatch.
fn family_color(table: &ColoringTable, p: &FiniteRigidSurjection, outer: &[FiniteRigidSurjection]) -> Option<usize> {
    let mut seen = None;
    for r in outer {
        let q = FiniteRigidSurjection::compose(r, p).ok()?;
        let c = table.color(&q)?;
        match seen {
            None => seen = Some(c),
            Some(s) if s != c => return None,
            Some(_) => {}
        }
    }
    seen
}

/// Lexicographically first `p: [n] → [m]` whose composed family is
/// monochromatic.
pub fn search_monochromatic(table: &ColoringTable, m: usize) -> Result<Option<MonochromaticWitness>> {
    if !(table.k <= m && m <= table.n) {
        return Err(Error::domain(format!("need k <= m <= n, got k = {}, m = {m}, n = {}", table.k, table.n)));
    }
    let outer = enumerate_rigid(m, table.k)?;
    for p in enumerate_rigid(table.n, m)? {
        if let Some(color) = family_color(table, &p, &outer) {
            let w = MonochromaticWitness { p, color };
            if !verify_witness(table, &w) {
                return Err(Error::invariant("search produced a witness that fails verification"));
            }
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Recomputes every `r ∘ p` and checks that all carry the witness color.
pub fn verify_witness(table: &ColoringTable, w: &MonochromaticWitness) -> bool {
    let m = w.p.codomain_len();
    if w.p.domain_len() != table.n || m < table.k || table.k == 0 {
        return false;
    }
    let Ok(outer) = enumerate_rigid(m, table.k) else {
        return false;
    };
    outer.iter().all(|r| FiniteRigidSurjection::compose(r, &w.p).ok().and_then(|q| table.color(&q)) == Some(w.color))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub values: Vec<usize>,
    pub color: usize,
}

/// How a coloring is supplied in an instance file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColoringSpec {
    Table { entries: Vec<TableEntry> },
    PositionMod { position: usize, modulus: usize },
}

/// A search instance: `{"n", "k", "m", "coloring"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyInstance {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub coloring: ColoringSpec,
}

impl RamseyInstance {
    pub fn table(&self) -> Result<ColoringTable> {
        match &self.coloring {
            ColoringSpec::PositionMod { position, modulus } => {
                ColoringTable::position_mod(self.n, self.k, *position, *modulus)
            }
            ColoringSpec::Table { entries } => {
                let mut colors = BTreeMap::new();
                for e in entries {
                    let f = FiniteRigidSurjection::new(e.values.clone())?;
                    if colors.insert(f, e.color).is_some() {
                        return Err(Error::domain(format!("duplicate table entry {:?}", e.values)));
                    }
                }
                ColoringTable::new(self.n, self.k, colors)
            }
        }
    }

    pub fn solve(&self) -> Result<Option<MonochromaticWitness>> {
        search_monochromatic(&self.table()?, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidsurj::factorize;

    // Exhaustive oracle: colors of all composites, no early exit.
    fn oracle(table: &ColoringTable, m: usize) -> Option<MonochromaticWitness> {
        let outer = enumerate_rigid(m, table.k()).unwrap();
        enumerate_rigid(table.n(), m).unwrap().into_iter().find_map(|p| {
            let colors: Vec<usize> = outer
                .iter()
                .map(|r| {
                    let q: Vec<usize> = p.values().iter().map(|&v| r.values()[v]).collect();
                    table.color(&FiniteRigidSurjection::new(q).unwrap()).unwrap()
                })
                .collect();
            colors.iter().all(|&c| c == colors[0]).then(|| MonochromaticWitness { p, color: colors[0] })
        })
    }

    #[test]
    fn constant_coloring_picks_first_candidate() {
        let table = ColoringTable::from_fn(5, 2, |_| 3).unwrap();
        for m in 2..=5 {
            let w = search_monochromatic(&table, m).unwrap().unwrap();
            assert_eq!(w.p, enumerate_rigid(5, m).unwrap()[0]);
            assert_eq!(w.color, 3);
        }
    }

    #[test]
    fn last_position_parity_matches_oracle() {
        let table = ColoringTable::position_mod(4, 2, 3, 2).unwrap();
        let w = search_monochromatic(&table, 2).unwrap();
        assert_eq!(w, oracle(&table, 2));
        assert!(verify_witness(&table, &w.unwrap()));
    }

    #[test]
    fn searches_agree_with_oracle() {
        for n in 2..=6 {
            for k in 1..=3.min(n) {
                for m in k..=n {
                    for pos in 0..n {
                        for modulus in 2..=3 {
                            let table = ColoringTable::position_mod(n, k, pos, modulus).unwrap();
                            let got = search_monochromatic(&table, m).unwrap();
                            assert_eq!(got, oracle(&table, m), "n={n} k={k} m={m} pos={pos} mod={modulus}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn full_width_only_tries_identity() {
        let mono = ColoringTable::from_fn(4, 2, |_| 0).unwrap();
        let w = search_monochromatic(&mono, 4).unwrap().unwrap();
        assert_eq!(w.p, FiniteRigidSurjection::identity(4));
        let split = ColoringTable::position_mod(4, 2, 3, 2).unwrap();
        assert_eq!(search_monochromatic(&split, 4).unwrap(), None);
    }

    #[test]
    fn witnesses_factor_back() {
        let table = ColoringTable::position_mod(6, 2, 2, 2).unwrap();
        let w = search_monochromatic(&table, 4).unwrap().unwrap();
        for r in enumerate_rigid(4, 2).unwrap() {
            let q = FiniteRigidSurjection::compose(&r, &w.p).unwrap();
            assert_eq!(factorize(&q, &w.p), Some(r));
        }
    }

    #[test]
    fn verify_rejects_tampering() {
        let table = ColoringTable::position_mod(5, 2, 4, 2).unwrap();
        let w = search_monochromatic(&table, 3).unwrap().unwrap();
        assert!(verify_witness(&table, &w));
        let bad = MonochromaticWitness { color: w.color + 1, ..w.clone() };
        assert!(!verify_witness(&table, &bad));
        let short = MonochromaticWitness { p: FiniteRigidSurjection::identity(3), color: w.color };
        assert!(!verify_witness(&table, &short));
        assert!(serde_json::from_str::<MonochromaticWitness>(r#"{"p":{"values":[0,2,1]},"color":0}"#).is_err());
    }

    #[test]
    fn parameter_errors() {
        let table = ColoringTable::position_mod(4, 2, 0, 2).unwrap();
        assert!(search_monochromatic(&table, 1).is_err());
        assert!(search_monochromatic(&table, 5).is_err());
        assert!(ColoringTable::position_mod(4, 2, 4, 2).is_err());
        assert!(ColoringTable::position_mod(4, 2, 0, 0).is_err());
    }

    #[test]
    fn instance_json() {
        let inst: RamseyInstance = serde_json::from_str(
            r#"{"n":3,"k":2,"m":2,"coloring":{"kind":"table","entries":[
                {"values":[0,0,1],"color":0},{"values":[0,1,0],"color":1},{"values":[0,1,1],"color":0}]}}"#,
        )
        .unwrap();
        let w = inst.solve().unwrap().unwrap();
        assert_eq!(w.p.values(), &[0, 0, 1]);
        let partial: RamseyInstance = serde_json::from_str(
            r#"{"n":3,"k":2,"m":2,"coloring":{"kind":"table","entries":[{"values":[0,0,1],"color":0}]}}"#,
        )
        .unwrap();
        assert!(partial.solve().is_err());
        let pm: RamseyInstance =
            serde_json::from_str(r#"{"n":4,"k":2,"m":3,"coloring":{"kind":"position_mod","position":3,"modulus":2}}"#)
                .unwrap();
        assert!(pm.solve().is_ok());
    }
}
