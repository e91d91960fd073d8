//! Grading semigroups: finite Cayley tables and the infinite cyclic group.
//!
//! All operations are written multiplicatively. Elements are [`Degree`]
//! handles: an index into the table for finite semigroups, an exponent for
//! the infinite cyclic group.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of a grading semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(pub i64);

impl Degree {
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    label: String,
    names: Vec<String>,
    table: Vec<usize>,
    identity: Option<usize>,
    inverses: Option<Vec<usize>>,
    cancellative: bool,
}

impl CayleyTable {
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.names.len() + b]
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Semigroup {
    Finite(CayleyTable),
    /// ⟨g⟩ ≅ ℤ, elements stored as exponents.
    InfiniteCyclic,
}

impl Semigroup {
    /// Validates a Cayley table. Associativity is checked exhaustively; the
    /// identity, inverses and cancellativity are derived from the table. When
    /// `identity` is named it must actually be a two-sided identity.
    pub fn from_table(
        label: impl Into<String>,
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        identity: Option<&str>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::input("a semigroup needs at least one element"));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::input(format!("duplicate element name `{name}`")));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::input(format!("Cayley table must be {n}×{n}")));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err(Error::input("Cayley table entry out of range"));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::input(format!(
                            "operation is not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let is_identity = |e: usize| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a);
        let found = (0..n).find(|&e| is_identity(e));
        if let Some(name) = identity {
            let e = *seen.get(name).ok_or_else(|| Error::input(format!("identity `{name}` is not an element")))?;
            if !is_identity(e) {
                return Err(Error::input(format!("`{name}` is not a two-sided identity")));
            }
        }
        let inverses = found.and_then(|e| {
            (0..n)
                .map(|a| (0..n).find(|&b| mul(a, b) == e && mul(b, a) == e))
                .collect::<Option<Vec<usize>>>()
        });
        let injective = |f: &dyn Fn(usize) -> usize| {
            let mut hit = vec![false; n];
            (0..n).all(|x| !std::mem::replace(&mut hit[f(x)], true))
        };
        let cancellative = (0..n).all(|a| injective(&|x| mul(a, x)) && injective(&|x| mul(x, a)));
        Ok(Semigroup::Finite(CayleyTable {
            label: label.into(),
            names,
            table: flat,
            identity: found,
            inverses,
            cancellative,
        }))
    }

    /// ℤ/nℤ written additively, elements named `0..n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n).map(|k| k.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z{n}"), names, table, Some("0")).expect("cyclic table is a group")
    }

    /// The symmetric group on three letters, composing right to left.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let names = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"].map(String::from).to_vec();
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("closed under composition");
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        Self::from_table("S3", names, table, Some("e")).expect("S3 is a group")
    }

    /// Klein four-group {e, a, b, c}.
    pub fn klein4() -> Self {
        let names = ["e", "a", "b", "c"].map(String::from).to_vec();
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Self::from_table("K4", names, table, Some("e")).expect("K4 is a group")
    }

    /// The monoid {1, z} with z² = z: commutative, idempotent, not cancellative.
    pub fn semilattice2() -> Self {
        let names = ["1", "z"].map(String::from).to_vec();
        Self::from_table("semilattice", names, vec![vec![0, 1], vec![1, 1]], Some("1")).expect("semilattice")
    }

    /// The left-zero semigroup ab = a on n elements (no identity for n ≥ 2).
    pub fn left_zero(n: usize) -> Self {
        let names = (0..n).map(|k| format!("l{k}")).collect();
        let table = (0..n).map(|a| vec![a; n]).collect();
        Self::from_table(format!("L{n}"), names, table, None).expect("left-zero semigroup")
    }

    /// Looks up a built-in by label: `Z<n>`, `S3`, `K4` (or `V4`),
    /// `semilattice`, `L<n>`, `Zinf`.
    pub fn builtin(label: &str) -> Option<Self> {
        match label {
            "S3" => Some(Self::symmetric3()),
            "K4" | "V4" | "klein4" => Some(Self::klein4()),
            "semilattice" => Some(Self::semilattice2()),
            "Zinf" | "Z" | "infinite_cyclic" => Some(Semigroup::InfiniteCyclic),
            "trivial" => Some(Self::cyclic(1)),
            _ => {
                if let Some(n) = label.strip_prefix('Z').and_then(|s| s.parse().ok()) {
                    (n >= 1).then(|| Self::cyclic(n))
                } else if let Some(n) = label.strip_prefix('L').and_then(|s| s.parse().ok()) {
                    (n >= 1).then(|| Self::left_zero(n))
                } else {
                    None
                }
            }
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Semigroup::Finite(t) => &t.label,
            Semigroup::InfiniteCyclic => "Zinf",
        }
    }

    #[inline]
    pub fn op(&self, a: Degree, b: Degree) -> Degree {
        match self {
            Semigroup::Finite(t) => Degree(t.mul(a.index(), b.index()) as i64),
            Semigroup::InfiniteCyclic => Degree(a.0.checked_add(b.0).expect("exponent overflow")),
        }
    }

    /// Product of a sequence; `None` for an empty sequence without identity.
    pub fn product(&self, items: impl IntoIterator<Item = Degree>) -> Option<Degree> {
        let mut it = items.into_iter();
        match it.next() {
            None => self.identity(),
            Some(first) => Some(it.fold(first, |acc, d| self.op(acc, d))),
        }
    }

    pub fn identity(&self) -> Option<Degree> {
        match self {
            Semigroup::Finite(t) => t.identity.map(|e| Degree(e as i64)),
            Semigroup::InfiniteCyclic => Some(Degree(0)),
        }
    }

    pub fn inverse(&self, a: Degree) -> Option<Degree> {
        match self {
            Semigroup::Finite(t) => t.inverses.as_ref().map(|inv| Degree(inv[a.index()] as i64)),
            Semigroup::InfiniteCyclic => Some(Degree(-a.0)),
        }
    }

    pub fn is_monoid(&self) -> bool {
        self.identity().is_some()
    }

    pub fn is_group(&self) -> bool {
        match self {
            Semigroup::Finite(t) => t.inverses.is_some(),
            Semigroup::InfiniteCyclic => true,
        }
    }

    pub fn is_cancellative(&self) -> bool {
        match self {
            Semigroup::Finite(t) => t.cancellative,
            Semigroup::InfiniteCyclic => true,
        }
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<usize> {
        match self {
            Semigroup::Finite(t) => Some(t.order()),
            Semigroup::InfiniteCyclic => None,
        }
    }

    pub fn table(&self) -> Option<&CayleyTable> {
        match self {
            Semigroup::Finite(t) => Some(t),
            Semigroup::InfiniteCyclic => None,
        }
    }

    /// All elements of a finite semigroup, in table order.
    pub fn elements(&self) -> Option<Vec<Degree>> {
        self.order().map(|n| (0..n as i64).map(Degree).collect())
    }

    pub fn is_idempotent(&self, a: Degree) -> bool {
        self.op(a, a) == a
    }

    pub fn name(&self, a: Degree) -> String {
        match self {
            Semigroup::Finite(t) => t.names[a.index()].clone(),
            Semigroup::InfiniteCyclic => match a.0 {
                0 => "1".into(),
                1 => "g".into(),
                k => format!("g^{k}"),
            },
        }
    }

    pub fn parse(&self, s: &str) -> Result<Degree> {
        let s = s.trim();
        match self {
            Semigroup::Finite(t) => t
                .names
                .iter()
                .position(|n| n == s)
                .map(|i| Degree(i as i64))
                .ok_or_else(|| Error::input(format!("`{s}` is not an element of {}", t.label))),
            Semigroup::InfiniteCyclic => {
                let bad = || Error::input(format!("`{s}` is not a power of g"));
                match s {
                    "1" | "e" => Ok(Degree(0)),
                    "g" => Ok(Degree(1)),
                    _ => {
                        let rest = s.strip_prefix('g').ok_or_else(bad)?;
                        let rest = rest.strip_prefix('^').unwrap_or(rest);
                        rest.parse().map(Degree).map_err(|_| bad())
                    }
                }
            }
        }
    }
}

impl fmt::Display for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// On-disk description of a grading semigroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SemigroupSpec {
    Cyclic {
        n: usize,
    },
    Table {
        elements: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        identity: Option<String>,
        table: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    InfiniteCyclic,
}

impl SemigroupSpec {
    pub fn build(&self) -> Result<Semigroup> {
        match self {
            SemigroupSpec::Cyclic { n } if *n >= 1 => Ok(Semigroup::cyclic(*n)),
            SemigroupSpec::Cyclic { .. } => Err(Error::input("cyclic group order must be positive")),
            SemigroupSpec::InfiniteCyclic => Ok(Semigroup::InfiniteCyclic),
            SemigroupSpec::Table { elements, identity, table, label } => {
                let index = |s: &String| {
                    elements
                        .iter()
                        .position(|e| e == s)
                        .ok_or_else(|| Error::input(format!("table entry `{s}` is not an element")))
                };
                let rows = table
                    .iter()
                    .map(|row| row.iter().map(index).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Semigroup::from_table(
                    label.clone().unwrap_or_else(|| "G".into()),
                    elements.clone(),
                    rows,
                    identity.as_deref(),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_flags() {
        for label in ["Z1", "Z2", "Z3", "S3", "K4"] {
            let g = Semigroup::builtin(label).unwrap();
            assert!(g.is_group() && g.is_monoid() && g.is_cancellative(), "{label}");
        }
        let s = Semigroup::semilattice2();
        assert!(s.is_monoid() && !s.is_group() && !s.is_cancellative());
        let l = Semigroup::left_zero(2);
        assert!(!l.is_monoid() && !l.is_cancellative());
        assert!(Semigroup::InfiniteCyclic.is_group());
    }

    #[test]
    fn s3_is_not_abelian() {
        let g = Semigroup::symmetric3();
        let a = g.parse("(12)").unwrap();
        let b = g.parse("(13)").unwrap();
        assert_ne!(g.op(a, b), g.op(b, a));
        assert_eq!(g.op(a, a), g.identity().unwrap());
        let r = g.parse("(123)").unwrap();
        assert_eq!(g.inverse(r), Some(g.parse("(132)").unwrap()));
    }

    #[test]
    fn non_associative_table_rejected() {
        // a·(a·b) ≠ (a·a)·b
        let names = vec!["a".to_string(), "b".to_string()];
        let err = Semigroup::from_table("bad", names, vec![vec![1, 0], vec![0, 0]], None).unwrap_err();
        assert!(err.to_string().contains("not associative"));
    }

    #[test]
    fn false_identity_rejected() {
        let names = vec!["0".to_string(), "1".to_string()];
        let err = Semigroup::from_table("Z2", names, vec![vec![0, 1], vec![1, 0]], Some("1")).unwrap_err();
        assert!(err.to_string().contains("identity"));
    }

    #[test]
    fn infinite_cyclic_names() {
        let g = Semigroup::InfiniteCyclic;
        for (s, k) in [("1", 0), ("g", 1), ("g1", 1), ("g^3", 3), ("g^-2", -2), ("g10", 10)] {
            assert_eq!(g.parse(s).unwrap(), Degree(k), "{s}");
        }
        assert_eq!(g.name(Degree(3)), "g^3");
        assert_eq!(g.parse(&g.name(Degree(-4))).unwrap(), Degree(-4));
        assert!(g.parse("h").is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec: SemigroupSpec = serde_json::from_str(
            r#"{"kind":"table","elements":["e","a"],"identity":"e","table":[["e","a"],["a","e"]]}"#,
        )
        .unwrap();
        let g = spec.build().unwrap();
        assert!(g.is_group());
        assert_eq!(g.order(), Some(2));
        let c: SemigroupSpec = serde_json::from_str(r#"{"kind":"cyclic","n":3}"#).unwrap();
        assert_eq!(c.build().unwrap(), Semigroup::cyclic(3));
        let z: SemigroupSpec = serde_json::from_str(r#"{"kind":"infinite_cyclic"}"#).unwrap();
        assert_eq!(z.build().unwrap(), Semigroup::InfiniteCyclic);
    }

    #[test]
    fn product_of_empty_sequence() {
        assert_eq!(Semigroup::cyclic(3).product([]), Some(Degree(0)));
        assert_eq!(Semigroup::left_zero(2).product([]), None);
    }
}
