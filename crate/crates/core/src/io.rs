//! JSON file formats.
//!
//! Every file type has a serde struct whose canonical form sorts atoms and
//! pairs, so serializing equal values always gives identical bytes.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coefficient::{Coefficient, CoefficientRing};
use crate::compression::CompressionMap;
use crate::error::{Error, Result};
use crate::grading::RelationHomomorphism;
use crate::grading_sets::{GradingSubset, GroupVerdict, VerdictWitness};
use crate::incidence::{Element, IncidenceRing};
use crate::relation::{Atom, FiniteRelation, Pair};
use crate::semigroup::{Semigroup, SemigroupSpec};

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

/// Canonical pretty JSON.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

/// `{"elements": [...], "pairs": [[x, y], ...], "reflexive_closure": bool}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub elements: Vec<Atom>,
    pub pairs: Vec<(Atom, Atom)>,
    #[serde(default)]
    pub reflexive_closure: bool,
}

impl RelationFile {
    pub fn build(&self) -> Result<FiniteRelation> {
        let rel = FiniteRelation::new(self.elements.iter().cloned(), self.pairs.iter().cloned())?;
        Ok(if self.reflexive_closure { rel.reflexive_closure() } else { rel })
    }

    /// Canonical form, loops written out explicitly.
    pub fn from_relation(rel: &FiniteRelation) -> Self {
        RelationFile {
            elements: rel.atoms().to_vec(),
            pairs: rel.named_pairs(rel.pairs()),
            reflexive_closure: false,
        }
    }
}

pub fn load_relation(path: &Path) -> Result<FiniteRelation> {
    read_json::<RelationFile>(path)?.build()
}

/// A coefficient written as a string; bare integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Text(String),
    Int(i64),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Text(s) => s.clone(),
            Scalar::Int(n) => n.to_string(),
        }
    }
}

/// `{"ring": {...}, "entries": [[x, y, "c"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementFile {
    pub ring: CoefficientRing,
    pub entries: Vec<(Atom, Atom, Scalar)>,
}

impl ElementFile {
    pub fn build<R: Coefficient>(&self, ring: &Arc<IncidenceRing<R>>) -> Result<Element<R>> {
        if ring.coefficients() != self.ring {
            return Err(Error::RingMismatch(format!("element over {} used in a ring over {}", self.ring, ring.coefficients())));
        }
        let rel = ring.relation();
        let entries = self
            .entries
            .iter()
            .map(|(x, y, c)| Ok((rel.pair_of(x.as_str(), y.as_str())?, R::parse_in(&self.ring, &c.text())?)))
            .collect::<Result<Vec<_>>>()?;
        ring.element(entries)
    }

    pub fn from_element<R: Coefficient>(f: &Element<R>) -> Self {
        let rel = f.relation();
        ElementFile {
            ring: f.ring().coefficients(),
            entries: f
                .entries()
                .map(|((x, y), c)| (rel.atom(x).clone(), rel.atom(y).clone(), Scalar::Text(c.to_string())))
                .collect(),
        }
    }
}

/// A built-in label such as `Z2` or `S3`, or a path to a group file.
pub fn load_group(spec: &str) -> Result<Semigroup> {
    if let Some(g) = Semigroup::builtin(spec) {
        return Ok(g);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::input(format!("`{spec}` is neither a built-in group nor a file")));
    }
    read_json::<SemigroupSpec>(path)?.build()
}

/// `{"values": [[x, y, g], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub values: Vec<(Atom, Atom, String)>,
}

impl HomFile {
    /// A homomorphism, validated on the whole relation.
    pub fn build(&self, rel: Arc<FiniteRelation>, g: Arc<Semigroup>) -> Result<RelationHomomorphism> {
        let named: Vec<(&str, &str, &str)> =
            self.values.iter().map(|(x, y, d)| (x.as_str(), y.as_str(), d.as_str())).collect();
        RelationHomomorphism::from_named(rel, g, &named)
    }

    /// Values on a subset only, in canonical pair order.
    pub fn partial(&self, rel: &FiniteRelation, g: &Semigroup) -> Result<Vec<(Pair, crate::Degree)>> {
        let mut out = self
            .values
            .iter()
            .map(|(x, y, d)| {
                let p = rel.pair_of(x.as_str(), y.as_str())?;
                if !rel.contains(p) {
                    return Err(Error::input(format!("{} is not in the relation", rel.show_pair(p))));
                }
                Ok((p, g.parse(d)?))
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        if out.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::input("a pair is given more than one value"));
        }
        Ok(out)
    }

    pub fn from_hom(hom: &RelationHomomorphism) -> Self {
        HomFile {
            values: hom
                .named_values()
                .into_iter()
                .map(|(x, y, d)| (Atom::new(x), Atom::new(y), d))
                .collect(),
        }
    }
}

/// `{"map": [[source, target], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompressionFile {
    pub map: Vec<(Atom, Atom)>,
}

impl CompressionFile {
    pub fn build(&self, source: Arc<FiniteRelation>, target: Arc<FiniteRelation>) -> Result<CompressionMap> {
        let named: Vec<(&str, &str)> = self.map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        CompressionMap::from_named(source, target, &named)
    }

    pub fn from_map(theta: &CompressionMap) -> Self {
        CompressionFile { map: theta.named() }
    }
}

/// `{"pairs": [[x, y], ...]}` or a bare list of pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubsetFile {
    Object { pairs: Vec<(Atom, Atom)> },
    Bare(Vec<(Atom, Atom)>),
}

impl SubsetFile {
    pub fn resolve(&self, rel: &FiniteRelation) -> Result<Vec<Pair>> {
        let pairs = match self {
            SubsetFile::Object { pairs } | SubsetFile::Bare(pairs) => pairs,
        };
        let named: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        rel.resolve_pairs(&named)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupFlags {
    pub extendible: bool,
    pub essential: bool,
}

/// `{"subset": [...], "groups": {"Z2": {...}}, "witness": null | {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub subset: Vec<(Atom, Atom)>,
    pub groups: std::collections::BTreeMap<String, GroupFlags>,
    pub certified_for_listed_groups: bool,
    pub witness: Option<WitnessReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub group: String,
    pub kind: &'static str,
    pub phi: Vec<(Atom, Atom, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extensions: Option<[Vec<(Atom, Atom, String)>; 2]>,
    pub message: String,
}

impl VerdictReport {
    pub fn new(subset: &GradingSubset, groups: &[Arc<Semigroup>]) -> Self {
        let rel = subset.owner();
        let named = |p: Pair, g: &Semigroup, d| (rel.atom(p.0).clone(), rel.atom(p.1).clone(), g.name(d));
        let witness = subset
            .verdicts()
            .iter()
            .zip(groups)
            .find(|(v, _)| !v.is_grading_set())
            .map(|(v, g): (&GroupVerdict, _)| {
                let w = v.witness.as_ref().expect("failed verdicts carry a witness");
                let message = w.describe(rel, g);
                match w {
                    VerdictWitness::NoExtension { phi } => WitnessReport {
                        group: v.group.clone(),
                        kind: "no_extension",
                        phi: phi.iter().map(|&(p, d)| named(p, g, d)).collect(),
                        extensions: None,
                        message,
                    },
                    VerdictWitness::TwoExtensions { phi, first, second } => {
                        let all = |vals: &[crate::Degree]| rel.pairs().iter().zip(vals).map(|(&p, &d)| named(p, g, d)).collect();
                        WitnessReport {
                            group: v.group.clone(),
                            kind: "two_extensions",
                            phi: phi.iter().map(|&(p, d)| named(p, g, d)).collect(),
                            extensions: Some([all(first), all(second)]),
                            message,
                        }
                    }
                }
            });
        VerdictReport {
            subset: rel.named_pairs(subset.pairs()),
            groups: subset
                .verdicts()
                .iter()
                .map(|v| (v.group.clone(), GroupFlags { extendible: v.extendible, essential: v.essential }))
                .collect(),
            certified_for_listed_groups: subset.certified(),
            witness,
        }
    }
}
