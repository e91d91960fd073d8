//! Relation homomorphisms and the good gradings they induce.
//!
//! A homomorphism Φ : ρ → G satisfies Φ(x,y)Φ(y,z) = Φ(x,z) on every
//! transitive triple. It induces a grading of I(X, ρ, R) whose component of
//! degree `a` holds the functions supported on Φ⁻¹(a). Components are kept
//! intensionally as the degree of each standard unit.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::incidence::{Element, IncidenceRing};
use crate::relation::{FiniteRelation, Pair};
use crate::semigroup::{Degree, Semigroup};

/// A validated homomorphism Φ : ρ → G.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationHomomorphism {
    relation: Arc<FiniteRelation>,
    target: Arc<Semigroup>,
    values: Vec<Degree>,
}

/// First transitive triple on which `values` (indexed by pair id) break the
/// homomorphism law.
pub fn first_violation(relation: &FiniteRelation, target: &Semigroup, values: &[Degree]) -> Option<[usize; 3]> {
    let id = |x, y| relation.pair_id(x, y).expect("pair in relation");
    relation
        .transitive_triples()
        .into_iter()
        .find(|&[x, y, z]| target.op(values[id(x, y)], values[id(y, z)]) != values[id(x, z)])
}

impl RelationHomomorphism {
    /// Validates values indexed by pair id.
    pub fn new(relation: Arc<FiniteRelation>, target: Arc<Semigroup>, values: Vec<Degree>) -> Result<Self> {
        if values.len() != relation.pair_count() {
            return Err(Error::input(format!(
                "expected {} values, one per pair of the relation, got {}",
                relation.pair_count(),
                values.len()
            )));
        }
        if let Some(order) = target.order() {
            if values.iter().any(|d| d.0 < 0 || d.0 as usize >= order) {
                return Err(Error::input(format!("value outside {target}")));
            }
        }
        if let Some([x, y, z]) = first_violation(&relation, &target, &values) {
            let v = |a, b| target.name(values[relation.pair_id(a, b).expect("pair")]);
            return Err(Error::NotAHomomorphism(format!(
                "triple ({},{},{}): Φ({},{})·Φ({},{}) = {}·{} ≠ {} = Φ({},{})",
                relation.atom(x),
                relation.atom(y),
                relation.atom(z),
                relation.atom(x),
                relation.atom(y),
                relation.atom(y),
                relation.atom(z),
                v(x, y),
                v(y, z),
                v(x, z),
                relation.atom(x),
                relation.atom(z)
            )));
        }
        Ok(RelationHomomorphism { relation, target, values })
    }

    /// Validates a map given on pairs; it must be total on ρ.
    pub fn from_map(relation: Arc<FiniteRelation>, target: Arc<Semigroup>, map: &BTreeMap<Pair, Degree>) -> Result<Self> {
        if let Some(&p) = map.keys().find(|&&p| !relation.contains(p)) {
            return Err(Error::input(format!("{} is not in the relation", relation.show_pair(p))));
        }
        let values = relation
            .pairs()
            .iter()
            .map(|p| {
                map.get(p)
                    .copied()
                    .ok_or_else(|| Error::input(format!("no value given for {}", relation.show_pair(*p))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(relation, target, values)
    }

    /// Validates a map given by atom and element names.
    pub fn from_named<S: AsRef<str>>(
        relation: Arc<FiniteRelation>,
        target: Arc<Semigroup>,
        named: &[(S, S, S)],
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, b, g) in named {
            let p = relation.pair_of(a.as_ref(), b.as_ref())?;
            let d = target.parse(g.as_ref())?;
            if map.insert(p, d).is_some_and(|old| old != d) {
                return Err(Error::input(format!("conflicting values for {}", relation.show_pair(p))));
            }
        }
        Self::from_map(relation, target, &map)
    }

    /// The map sending every pair to the identity of a monoid.
    pub fn constant_identity(relation: Arc<FiniteRelation>, target: Arc<Semigroup>) -> Result<Self> {
        let e = target
            .identity()
            .ok_or_else(|| Error::input(format!("{target} has no identity")))?;
        let values = vec![e; relation.pair_count()];
        Self::new(relation, target, values)
    }

    pub fn relation(&self) -> &Arc<FiniteRelation> {
        &self.relation
    }

    pub fn target(&self) -> &Arc<Semigroup> {
        &self.target
    }

    pub fn values(&self) -> &[Degree] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> Option<Degree> {
        self.relation.pair_id(x, y).map(|id| self.values[id])
    }

    pub fn value(&self, p: Pair) -> Degree {
        self.get(p.0, p.1).expect("pair in relation")
    }

    /// Im Φ.
    pub fn image(&self) -> BTreeSet<Degree> {
        self.values.iter().copied().collect()
    }

    /// Φ restricted to a set of pairs.
    pub fn restrict(&self, pairs: &[Pair]) -> Vec<Degree> {
        pairs.iter().map(|&p| self.value(p)).collect()
    }

    /// `(x, y, Φ(x,y))` by name, canonical order.
    pub fn named_values(&self) -> Vec<(String, String, String)> {
        self.relation
            .pairs()
            .iter()
            .zip(&self.values)
            .map(|(&(x, y), &d)| (self.relation.atom(x).to_string(), self.relation.atom(y).to_string(), self.target.name(d)))
            .collect()
    }

    /// Diagonal values and the constraints they must meet.
    pub fn diagonal_constraint(&self) -> DiagonalReport {
        let values: Vec<(usize, Degree)> = (0..self.relation.len()).filter_map(|x| self.get(x, x).map(|d| (x, d))).collect();
        let identity = self.target.identity();
        DiagonalReport {
            all_idempotent: values.iter().all(|&(_, d)| self.target.is_idempotent(d)),
            all_identity: identity.is_some() && values.iter().all(|&(_, d)| Some(d) == identity),
            identity_forced: self.target.is_monoid() && self.target.is_cancellative(),
            values,
        }
    }
}

/// Diagonal values Φ(x,x) of a homomorphism.
///
/// Every Φ(x,x) is idempotent because e_xx is. In a cancellative monoid the
/// only idempotent is the identity, so there the diagonal is forced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalReport {
    pub values: Vec<(usize, Degree)>,
    pub all_idempotent: bool,
    pub all_identity: bool,
    pub identity_forced: bool,
}

impl DiagonalReport {
    pub fn holds(&self) -> bool {
        self.all_idempotent && (!self.identity_forced || self.all_identity)
    }
}

/// A good grading of I(X, ρ, R): every standard unit is homogeneous, with
/// the degrees recorded per pair.
#[derive(Clone, Debug)]
pub struct GoodGrading<R> {
    ring: Arc<IncidenceRing<R>>,
    target: Arc<Semigroup>,
    degrees: Vec<Degree>,
}

/// Two units whose product leaves the component it must land in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureWitness {
    pub left: Pair,
    pub right: Pair,
    /// A support pair of the product with the wrong degree.
    pub offending: Pair,
}

/// The grading induced by Φ. The ring must be over Φ's relation and that
/// relation must be balanced. The image of Φ is finite for any finite
/// relation; infinite families are handled by [`NaturalsChainFamily`].
pub fn induce_grading<R: Coefficient>(hom: &RelationHomomorphism, ring: &Arc<IncidenceRing<R>>) -> Result<GoodGrading<R>> {
    if ring.relation() != hom.relation().as_ref() {
        return Err(Error::RingMismatch("homomorphism and ring are over different relations".into()));
    }
    ring.balance().map_err(|v| Error::NotBalanced(v.describe(ring.relation())))?;
    Ok(GoodGrading { ring: Arc::clone(ring), target: Arc::clone(hom.target()), degrees: hom.values().to_vec() })
}

impl<R: Coefficient> GoodGrading<R> {
    /// Wraps an arbitrary assignment of degrees to the standard units,
    /// indexed by pair id. Nothing is validated.
    pub fn from_unit_degrees(ring: Arc<IncidenceRing<R>>, target: Arc<Semigroup>, degrees: Vec<Degree>) -> Result<Self> {
        if degrees.len() != ring.relation().pair_count() {
            return Err(Error::input("one degree per pair of the relation is required"));
        }
        Ok(GoodGrading { ring, target, degrees })
    }

    pub fn ring(&self) -> &Arc<IncidenceRing<R>> {
        &self.ring
    }

    pub fn target(&self) -> &Arc<Semigroup> {
        &self.target
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    /// ∂e_xy.
    pub fn unit_degree(&self, p: Pair) -> Degree {
        self.degrees[self.ring.relation().pair_id(p.0, p.1).expect("pair in relation")]
    }

    /// Supp_G S, the degrees with a nonzero component.
    pub fn support(&self) -> BTreeSet<Degree> {
        self.degrees.iter().copied().collect()
    }

    /// Membership in S_a: every support pair has degree `a`.
    pub fn in_component(&self, f: &Element<R>, a: Degree) -> bool {
        f.entries().all(|(p, _)| self.unit_degree(p) == a)
    }

    /// ∂f for a nonzero homogeneous element.
    pub fn degree_of(&self, f: &Element<R>) -> Option<Degree> {
        let mut degs = f.entries().map(|(p, _)| self.unit_degree(p));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Splits f into homogeneous parts of distinct degrees, ascending by
    /// degree. The zero element has no parts.
    pub fn decompose(&self, f: &Element<R>) -> Result<Vec<(Degree, Element<R>)>> {
        if f.ring().relation() != self.ring.relation() {
            return Err(Error::RingMismatch("element is over a different relation".into()));
        }
        let mut parts: BTreeMap<Degree, Vec<(Pair, R)>> = BTreeMap::new();
        for (p, c) in f.entries() {
            parts.entry(self.unit_degree(p)).or_default().push((p, c.clone()));
        }
        parts
            .into_iter()
            .map(|(d, entries)| Ok((d, f.ring().element(entries)?)))
            .collect()
    }

    /// Checks S_b S_c ⊆ S_bc on every pair of standard units, multiplying
    /// them by convolution.
    pub fn verify_component_closure(&self) -> Result<(), ClosureWitness> {
        let rel = self.ring.relation();
        let units: Vec<Element<R>> = rel
            .pairs()
            .iter()
            .map(|&(x, y)| self.ring.unit(x, y).expect("pair in relation"))
            .collect();
        for (i, &left) in rel.pairs().iter().enumerate() {
            for (j, &right) in rel.pairs().iter().enumerate() {
                let product = units[i].convolve_ungated(&units[j]).expect("same ring");
                let want = self.target.op(self.degrees[i], self.degrees[j]);
                let offending = product.entries().map(|(p, _)| p).find(|&p| self.unit_degree(p) != want);
                if let Some(offending) = offending {
                    return Err(ClosureWitness { left, right, offending });
                }
            }
        }
        Ok(())
    }

    pub fn describe_witness(&self, w: &ClosureWitness) -> String {
        let rel = self.ring.relation();
        let name = |p: Pair| format!("e[{},{}]", rel.atom(p.0), rel.atom(p.1));
        format!(
            "{}·{} has a term {} of degree {}, expected {}·{} = {}",
            name(w.left),
            name(w.right),
            name(w.offending),
            self.target.name(self.unit_degree(w.offending)),
            self.target.name(self.unit_degree(w.left)),
            self.target.name(self.unit_degree(w.right)),
            self.target.name(self.target.op(self.unit_degree(w.left), self.unit_degree(w.right)))
        )
    }
}

/// Recovers Φ(x, y) = ∂e_xy from a good grading with every e_xx in S₁.
///
/// The target must be a monoid. A grading that violates component closure is
/// rejected as such; a closed grading with some ∂e_xx ≠ 1 (only possible for
/// non-cancellative targets) is refused because it need not be induced.
pub fn extract_homomorphism<R: Coefficient>(grading: &GoodGrading<R>) -> Result<RelationHomomorphism> {
    let target = grading.target();
    let Some(identity) = target.identity() else {
        return Err(Error::refused(format!(
            "{target} has no identity, so e_xx ∈ S_1 cannot be stated and the grading need not be induced"
        )));
    };
    grading
        .verify_component_closure()
        .map_err(|w| Error::ClosureViolation(grading.describe_witness(&w)))?;
    let rel = grading.ring().relation();
    if let Some(x) = (0..rel.len()).find(|&x| grading.unit_degree((x, x)) != identity) {
        return Err(Error::refused(format!(
            "∂e[{x},{x}] = {} is an idempotent other than the identity of the non-cancellative {target}; \
             such a grading is not determined by a homomorphism",
            target.name(grading.unit_degree((x, x))),
            x = rel.atom(x)
        )));
    }
    RelationHomomorphism::new(Arc::clone(grading.ring().relation_arc()), Arc::clone(target), grading.degrees().to_vec())
}

/// The homomorphism on the chain 1 < 2 < … < k into ⟨g⟩ with
/// φ(m, m+1) = g^m, extended along the unique chain of each interval.
#[derive(Clone, Debug)]
pub struct TruncatedNaturals {
    pub k: usize,
    pub hom: RelationHomomorphism,
}

impl TruncatedNaturals {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::input("the truncated chain needs k ≥ 2"));
        }
        let chain = Arc::new(crate::fixtures::chain(k));
        let g = Arc::new(Semigroup::InfiniteCyclic);
        let arrows: BTreeMap<Pair, Degree> = (0..k - 1).map(|m| ((m, m + 1), Degree(m as i64 + 1))).collect();
        let hom = crate::grading_sets::hasse_extension(chain, g, &arrows)?;
        Ok(TruncatedNaturals { k, hom })
    }

    /// Exponents of Im Φ on off-diagonal pairs, ascending.
    pub fn off_diagonal_image(&self) -> Vec<i64> {
        let rel = self.hom.relation();
        let set: BTreeSet<i64> = rel.off_diagonal().map(|p| self.hom.value(p).0).collect();
        set.into_iter().collect()
    }

    pub fn image_size(&self) -> usize {
        self.hom.image().len()
    }
}

/// The same construction on all of ℕ, represented only through its finite
/// truncations. Its image is unbounded, so it induces no grading.
#[derive(Clone, Copy, Debug, Default)]
pub struct NaturalsChainFamily;

impl NaturalsChainFamily {
    pub fn truncate(&self, k: usize) -> Result<TruncatedNaturals> {
        TruncatedNaturals::new(k)
    }

    /// Always refused: Im Φ ⊇ {g, g², g³, …} is infinite, and a homomorphism
    /// induces a grading only when its image is finite.
    pub fn induce_grading(&self) -> Result<()> {
        Err(Error::refused(
            "Im Φ is infinite (it contains g^m for every m), so Φ does not induce a grading",
        ))
    }
}

/// Summary of the truncations k = 2..=k_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteSupportReport {
    /// `(k, |Im Φ|, off-diagonal image exponents)`.
    pub rows: Vec<(usize, usize, Vec<i64>)>,
    pub strictly_increasing: bool,
    pub lower_bound_holds: bool,
}

pub fn infinite_support_report(k_max: usize) -> Result<InfiniteSupportReport> {
    let family = NaturalsChainFamily;
    let mut rows = Vec::new();
    for k in 2..=k_max {
        let t = family.truncate(k)?;
        rows.push((k, t.image_size(), t.off_diagonal_image()));
    }
    let strictly_increasing = rows.windows(2).all(|w| w[0].1 < w[1].1);
    let lower_bound_holds = rows.iter().all(|(k, size, _)| *size >= k - 1);
    Ok(InfiniteSupportReport { rows, strictly_increasing, lower_bound_holds })
}
