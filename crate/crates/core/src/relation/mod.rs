//! Finite relations on a canonically ordered set of atoms.
//!
//! A [`FiniteRelation`] stores its ground set sorted by the canonical atom
//! order and a dense adjacency matrix. Every pair, triple and witness is
//! expressed through element indices, so the index order *is* the canonical
//! order and iteration is deterministic.

mod order;
mod predicates;

pub use order::{Crosscut, PairedQuotient};
pub use predicates::{BalanceViolation, ClaspKind, MinimalConnectivityViolation, StabilityViolation};

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered pair of element indices.
pub type Pair = (usize, usize);

/// An element of a ground set.
///
/// Atoms that parse as integers order numerically and come before all other
/// atoms, which order lexicographically. `"10"` therefore sorts after `"9"`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Self {
        Atom(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<i64> {
        self.0.parse().ok()
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

impl From<String> for Atom {
    fn from(s: String) -> Self {
        Atom(s)
    }
}

impl From<i64> for Atom {
    fn from(n: i64) -> Self {
        Atom(n.to_string())
    }
}

impl Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        Ok(match Raw::deserialize(deserializer)? {
            Raw::Str(s) => Atom(s),
            Raw::Int(n) => Atom(n.to_string()),
        })
    }
}

/// A relation ρ ⊆ X × X on a finite ground set X.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    atoms: Vec<Atom>,
    related: Vec<bool>,
    // dense id of each related pair in row-major order; u32::MAX when unrelated
    pair_ids: Vec<u32>,
    pairs: Vec<Pair>,
}

impl FiniteRelation {
    /// Builds a relation from atoms and pairs. Duplicate atoms and pairs are
    /// merged; a pair naming an atom outside the ground set is an error.
    pub fn new<A, P>(elements: impl IntoIterator<Item = A>, pairs: impl IntoIterator<Item = (P, P)>) -> Result<Self>
    where
        A: Into<Atom>,
        P: Into<Atom>,
    {
        let atoms: BTreeSet<Atom> = elements.into_iter().map(Into::into).collect();
        let atoms: Vec<Atom> = atoms.into_iter().collect();
        let n = atoms.len();
        let mut related = vec![false; n * n];
        for (a, b) in pairs {
            let (a, b) = (a.into(), b.into());
            let i = atoms.binary_search(&a).map_err(|_| Error::UnknownAtom(a.0.clone()))?;
            let j = atoms.binary_search(&b).map_err(|_| Error::UnknownAtom(b.0.clone()))?;
            related[i * n + j] = true;
        }
        Ok(Self::from_parts(atoms, related))
    }

    /// Builds a relation over already sorted, distinct atoms from a predicate
    /// on index pairs.
    pub fn from_fn(atoms: Vec<Atom>, mut relates: impl FnMut(usize, usize) -> bool) -> Self {
        debug_assert!(atoms.windows(2).all(|w| w[0] < w[1]));
        let n = atoms.len();
        let related = (0..n * n).map(|k| relates(k / n, k % n)).collect();
        Self::from_parts(atoms, related)
    }

    /// Relation on the atoms `1..=n` (as strings) built from a predicate on
    /// zero-based indices.
    pub fn on_range(n: usize, relates: impl FnMut(usize, usize) -> bool) -> Self {
        let atoms = (1..=n as i64).map(Atom::from).collect();
        Self::from_fn(atoms, relates)
    }

    fn from_parts(atoms: Vec<Atom>, related: Vec<bool>) -> Self {
        let n = atoms.len();
        let mut pair_ids = vec![u32::MAX; n * n];
        let mut pairs = Vec::new();
        for (k, &r) in related.iter().enumerate() {
            if r {
                pair_ids[k] = pairs.len() as u32;
                pairs.push((k / n, k % n));
            }
        }
        FiniteRelation { atoms, related, pair_ids, pairs }
    }

    /// The same relation with every loop (x, x) added.
    pub fn reflexive_closure(&self) -> Self {
        let n = self.len();
        let mut related = self.related.clone();
        for i in 0..n {
            related[i * n + i] = true;
        }
        Self::from_parts(self.atoms.clone(), related)
    }

    /// The smallest transitive relation containing this one.
    pub fn transitive_closure(&self) -> Self {
        let n = self.len();
        let mut related = self.related.clone();
        for k in 0..n {
            for i in 0..n {
                if related[i * n + k] {
                    for j in 0..n {
                        if related[k * n + j] {
                            related[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_parts(self.atoms.clone(), related)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.atoms
            .binary_search(&Atom::new(name))
            .map_err(|_| Error::UnknownAtom(name.to_string()))
    }

    pub fn pair_of(&self, x: &str, y: &str) -> Result<Pair> {
        Ok((self.index_of(x)?, self.index_of(y)?))
    }

    #[inline]
    pub fn relates(&self, x: usize, y: usize) -> bool {
        self.related[x * self.len() + y]
    }

    pub fn contains(&self, (x, y): Pair) -> bool {
        self.relates(x, y)
    }

    /// All related pairs in canonical (row-major) order.
    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// Off-diagonal part ρ* = ρ ∖ δ(ρ), in canonical order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = Pair> + '_ {
        self.pairs.iter().copied().filter(|&(x, y)| x != y)
    }

    /// Dense position of a related pair within [`pairs`](Self::pairs).
    #[inline]
    pub fn pair_id(&self, x: usize, y: usize) -> Option<usize> {
        match self.pair_ids[x * self.len() + y] {
            u32::MAX => None,
            id => Some(id as usize),
        }
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// `[x, y] = {z : xρz and zρy}` in canonical order.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.relates(x, z) && self.relates(z, y)).collect()
    }

    /// Interval looked up by atom names.
    pub fn interval_of(&self, x: &str, y: &str) -> Result<Vec<Atom>> {
        let (x, y) = self.pair_of(x, y)?;
        Ok(self.interval(x, y).into_iter().map(|z| self.atoms[z].clone()).collect())
    }

    /// Every (x, y, z) with xρy, yρz and xρz, in lexicographic order.
    pub fn transitive_triples(&self) -> Vec<[usize; 3]> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if !self.relates(x, y) {
                    continue;
                }
                for z in 0..n {
                    if self.relates(y, z) && self.relates(x, z) {
                        out.push([x, y, z]);
                    }
                }
            }
        }
        out
    }

    pub fn is_transitive_triple(&self, [x, y, z]: [usize; 3]) -> bool {
        self.relates(x, y) && self.relates(y, z) && self.relates(x, z)
    }

    /// Human-readable `(x,y)` for a pair.
    pub fn show_pair(&self, (x, y): Pair) -> String {
        format!("({},{})", self.atoms[x], self.atoms[y])
    }

    pub fn show_set(&self, items: &[usize]) -> String {
        let inner: Vec<String> = items.iter().map(|&i| self.atoms[i].to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }

    pub fn show_pairs(&self, pairs: &[Pair]) -> String {
        let inner: Vec<String> = pairs.iter().map(|&p| self.show_pair(p)).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Named form of a pair set, canonical order.
    pub fn named_pairs(&self, pairs: &[Pair]) -> Vec<(Atom, Atom)> {
        let mut sorted = pairs.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.into_iter().map(|(x, y)| (self.atoms[x].clone(), self.atoms[y].clone())).collect()
    }

    /// Resolves named pairs to index pairs, requiring each to be in ρ.
    pub fn resolve_pairs<S: AsRef<str>>(&self, named: &[(S, S)]) -> Result<Vec<Pair>> {
        let mut out = Vec::with_capacity(named.len());
        for (a, b) in named {
            let p = self.pair_of(a.as_ref(), b.as_ref())?;
            if !self.contains(p) {
                return Err(Error::input(format!("pair ({},{}) is not in the relation", a.as_ref(), b.as_ref())));
            }
            out.push(p);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRelation {{ X = {{")?;
        for (k, a) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        let off: Vec<Pair> = self.off_diagonal().collect();
        write!(f, "}}, ρ* = {} }}", self.show_pairs(&off))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn atom_order_is_numeric_first() {
        let mut atoms: Vec<Atom> = ["b", "10", "9", "a", "-1"].into_iter().map(Atom::from).collect();
        atoms.sort();
        let names: Vec<&str> = atoms.iter().map(Atom::as_str).collect();
        assert_eq!(names, ["-1", "9", "10", "a", "b"]);
    }

    #[test]
    fn unknown_endpoint_is_rejected() {
        let err = FiniteRelation::new(["1", "2"], [("1", "3")]).unwrap_err();
        assert!(matches!(err, Error::UnknownAtom(a) if a == "3"));
    }

    #[test]
    fn chain3_interval() {
        let c = fixtures::chain3();
        assert_eq!(c.interval_of("1", "3").unwrap(), vec![Atom::from(1), Atom::from(2), Atom::from(3)]);
        assert!(c.interval_of("3", "1").unwrap().is_empty());
        assert!(c.interval_of("1", "7").is_err());
    }

    #[test]
    fn chain3_triples() {
        let c = fixtures::chain3();
        let t = c.transitive_triples();
        assert!(t.contains(&[0, 1, 2]));
        for x in 0..3 {
            assert!(t.contains(&[x, x, x]));
        }
    }

    #[test]
    fn fig2a_off_diagonal_triples() {
        let r = fixtures::fig2a();
        let idx = |s: &str| r.index_of(s).unwrap();
        let t = r.transitive_triples();
        for [a, b, c] in [["2", "3", "4"], ["2", "4", "3"], ["3", "4", "3"], ["4", "3", "4"]] {
            assert!(t.contains(&[idx(a), idx(b), idx(c)]));
        }
    }

    #[test]
    fn antichain_has_only_diagonal_triples() {
        let r = FiniteRelation::on_range(4, |i, j| i == j);
        assert!(r.transitive_triples().iter().all(|[x, y, z]| x == y && y == z));
        assert_eq!(r.transitive_triples().len(), 4);
    }

    #[test]
    fn pair_ids_follow_canonical_order() {
        let r = fixtures::fig2b();
        for (k, &(x, y)) in r.pairs().iter().enumerate() {
            assert_eq!(r.pair_id(x, y), Some(k));
        }
        let mut sorted = r.pairs().to_vec();
        sorted.sort();
        assert_eq!(sorted, r.pairs());
    }
}
