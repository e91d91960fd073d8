//! Extendible, essential and grading subsets of a relation.
//!
//! A subset β ⊆ ρ is G-extendible when every map β → G extends to a
//! homomorphism ρ → G, G-essential when two distinct homomorphisms never
//! agree on it, and a G-grading set when both hold. Verdicts are computed per
//! named finite group, so a positive answer is only ever certified for the
//! groups that were listed.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extension::ExtensionSolver;
use crate::grading::RelationHomomorphism;
use crate::relation::{Atom, FiniteRelation, PairedQuotient, Pair};
use crate::semigroup::{Degree, Semigroup};
use crate::util::{checked_pow, Combinations, Odometer};

/// Default enumeration cap.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Cap on the number of assignments or homomorphisms a verdict may
/// enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_enumeration: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_enumeration: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(max_enumeration: u64) -> Result<Self> {
        if max_enumeration == 0 {
            return Err(Error::input("budget must be positive"));
        }
        Ok(Budget { max_enumeration })
    }
}

/// Z2, Z3 and S3.
pub fn default_test_groups() -> Vec<Arc<Semigroup>> {
    vec![Arc::new(Semigroup::cyclic(2)), Arc::new(Semigroup::cyclic(3)), Arc::new(Semigroup::symmetric3())]
}

/// An assignment on a subset, in canonical pair order.
pub type Assignment = Vec<(Pair, Degree)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictWitness {
    /// A map on the subset with no extension.
    NoExtension { phi: Assignment },
    /// Two distinct homomorphisms (values by pair id) agreeing on the subset.
    TwoExtensions { phi: Assignment, first: Vec<Degree>, second: Vec<Degree> },
}

impl VerdictWitness {
    pub fn describe(&self, rel: &FiniteRelation, g: &Semigroup) -> String {
        let show = |phi: &Assignment| {
            let parts: Vec<String> = phi
                .iter()
                .map(|&(p, d)| format!("φ{} = {}", rel.show_pair(p), g.name(d)))
                .collect();
            if parts.is_empty() { "the empty map".to_string() } else { parts.join(", ") }
        };
        match self {
            VerdictWitness::NoExtension { phi } => format!("{} has no extension", show(phi)),
            VerdictWitness::TwoExtensions { phi, first, second } => {
                let diffs: Vec<String> = first
                    .iter()
                    .zip(second)
                    .enumerate()
                    .filter(|(_, (a, b))| a != b)
                    .map(|(id, (&a, &b))| format!("{} ({} vs {})", rel.show_pair(rel.pairs()[id]), g.name(a), g.name(b)))
                    .collect();
                format!("{} extends in two ways, differing at {}", show(phi), diffs.join(", "))
            }
        }
    }
}

/// Verdict of one subset against one finite semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupVerdict {
    pub group: String,
    pub extendible: bool,
    pub essential: bool,
    pub witness: Option<VerdictWitness>,
}

impl GroupVerdict {
    pub fn is_grading_set(&self) -> bool {
        self.extendible && self.essential
    }
}

fn subset_ids(rel: &FiniteRelation, pairs: &[Pair]) -> Result<Vec<usize>> {
    pairs
        .iter()
        .map(|&(x, y)| {
            rel.pair_id(x, y)
                .ok_or_else(|| Error::input(format!("{} is not in the relation", rel.show_pair((x, y)))))
        })
        .collect()
}

fn decode(mut code: u64, len: usize, radix: usize) -> Vec<Degree> {
    let mut out = vec![Degree(0); len];
    for slot in out.iter_mut().rev() {
        *slot = Degree((code % radix as u64) as i64);
        code /= radix as u64;
    }
    out
}

/// Decides extendibility and essentiality of `pairs` for a finite `g`.
///
/// When |G|^|β| fits the budget every φ is enumerated in parallel and each
/// is extended by propagation search with a limit of two. Otherwise all of
/// Hom(ρ, G) is enumerated and the restriction map to β is examined. The
/// witness is the least failing φ in lexicographic order either way.
pub fn grading_set_verdict(rel: &FiniteRelation, pairs: &[Pair], g: &Semigroup, budget: Budget) -> Result<GroupVerdict> {
    let mut pairs = pairs.to_vec();
    pairs.sort_unstable();
    pairs.dedup();
    let ids = subset_ids(rel, &pairs)?;
    let solver = ExtensionSolver::new(rel, g)?;
    let radix = g.order().expect("solver accepted a finite semigroup");
    let total = checked_pow(radix, ids.len());
    let assignment = |vals: &[Degree]| -> Assignment { pairs.iter().copied().zip(vals.iter().copied()).collect() };

    let (missing, doubled) = match total {
        Some(total) if total <= budget.max_enumeration => {
            let counts: Vec<u8> = (0..total)
                .into_par_iter()
                .map(|code| {
                    let phi = decode(code, ids.len(), radix);
                    let fixed: Vec<(usize, Degree)> = ids.iter().copied().zip(phi).collect();
                    solver.count(&fixed, 2) as u8
                })
                .collect();
            let first = |want: u8| counts.iter().position(|&c| c == want).map(|c| decode(c as u64, ids.len(), radix));
            (first(0), first(2))
        }
        _ => {
            let homs = solver.solve(&[], budget.max_enumeration.saturating_add(1) as usize);
            if homs.len() as u64 > budget.max_enumeration {
                return Err(Error::Budget(format!(
                    "{radix}^{} assignments and more than {} homomorphisms into {g}",
                    ids.len(),
                    budget.max_enumeration
                )));
            }
            let mut seen: BTreeSet<Vec<Degree>> = BTreeSet::new();
            let mut doubled: Option<Vec<Degree>> = None;
            for h in &homs {
                let image: Vec<Degree> = ids.iter().map(|&i| h[i]).collect();
                if !seen.insert(image.clone()) && doubled.as_ref().is_none_or(|d| image < *d) {
                    doubled = Some(image);
                }
            }
            // fewer homomorphisms than assignments, so some assignment is absent
            let mut keys = seen.iter();
            let missing = Odometer::new(ids.len(), radix)
                .map(|digits| digits.into_iter().map(|d| Degree(d as i64)).collect::<Vec<_>>())
                .find(|phi| keys.next() != Some(phi));
            (missing, doubled)
        }
    };

    let witness = if let Some(phi) = &missing {
        Some(VerdictWitness::NoExtension { phi: assignment(phi) })
    } else if let Some(phi) = &doubled {
        let fixed: Vec<(usize, Degree)> = ids.iter().copied().zip(phi.iter().copied()).collect();
        let mut two = solver.solve(&fixed, 2).into_iter();
        let (first, second) = (two.next().expect("two extensions"), two.next().expect("two extensions"));
        Some(VerdictWitness::TwoExtensions { phi: assignment(phi), first, second })
    } else {
        None
    };
    Ok(GroupVerdict { group: g.label().to_string(), extendible: missing.is_none(), essential: doubled.is_none(), witness })
}

pub fn is_extendible(rel: &FiniteRelation, pairs: &[Pair], g: &Semigroup, budget: Budget) -> Result<bool> {
    Ok(grading_set_verdict(rel, pairs, g, budget)?.extendible)
}

pub fn is_essential(rel: &FiniteRelation, pairs: &[Pair], g: &Semigroup, budget: Budget) -> Result<bool> {
    Ok(grading_set_verdict(rel, pairs, g, budget)?.essential)
}

pub fn is_grading_set(rel: &FiniteRelation, pairs: &[Pair], g: &Semigroup, budget: Budget) -> Result<bool> {
    Ok(grading_set_verdict(rel, pairs, g, budget)?.is_grading_set())
}

/// A subset of ρ together with the verdicts it has been checked against.
#[derive(Clone, Debug)]
pub struct GradingSubset {
    owner: Arc<FiniteRelation>,
    pairs: Vec<Pair>,
    verdicts: Vec<GroupVerdict>,
}

impl GradingSubset {
    pub fn new(owner: Arc<FiniteRelation>, pairs: impl IntoIterator<Item = Pair>) -> Result<Self> {
        let mut pairs: Vec<Pair> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        subset_ids(&owner, &pairs)?;
        Ok(GradingSubset { owner, pairs, verdicts: Vec::new() })
    }

    pub fn owner(&self) -> &Arc<FiniteRelation> {
        &self.owner
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn verdicts(&self) -> &[GroupVerdict] {
        &self.verdicts
    }

    /// Checks the subset against each group, replacing earlier verdicts.
    pub fn certify(&mut self, groups: &[Arc<Semigroup>], budget: Budget) -> Result<&[GroupVerdict]> {
        self.verdicts = groups
            .iter()
            .map(|g| grading_set_verdict(&self.owner, &self.pairs, g, budget))
            .collect::<Result<_>>()?;
        Ok(&self.verdicts)
    }

    /// Grading set for every listed group. False before [`certify`](Self::certify).
    pub fn certified(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(GroupVerdict::is_grading_set)
    }

    /// The first failing verdict, described.
    pub fn first_failure(&self, groups: &[Arc<Semigroup>]) -> Option<String> {
        self.verdicts.iter().zip(groups).find(|(v, _)| !v.is_grading_set()).map(|(v, g)| {
            let w = v.witness.as_ref().expect("failed verdicts carry a witness");
            format!("{}: {}", v.group, w.describe(&self.owner, g))
        })
    }
}

impl fmt::Display for GradingSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.owner.show_pairs(&self.pairs))
    }
}

/// The unique homomorphism on a minimally connected partial order that takes
/// the given values on the Hasse arrows, multiplied out along the chain of
/// each interval. The diagonal goes to the identity, so `g` must be a monoid.
pub fn hasse_extension(
    rel: Arc<FiniteRelation>,
    g: Arc<Semigroup>,
    phi: &BTreeMap<Pair, Degree>,
) -> Result<RelationHomomorphism> {
    rel.check_minimally_connected()
        .map_err(|v| Error::input(format!("not minimally connected: {}", v.describe(&rel))))?;
    let identity = g
        .identity()
        .ok_or_else(|| Error::input(format!("{g} has no identity for the diagonal")))?;
    let arrows: BTreeSet<Pair> = rel.hasse_arrows()?.into_iter().collect();
    if let Some(&p) = phi.keys().find(|p| !arrows.contains(p)) {
        return Err(Error::input(format!("{} is not a Hasse arrow", rel.show_pair(p))));
    }
    if let Some(&p) = arrows.iter().find(|p| !phi.contains_key(p)) {
        return Err(Error::input(format!("no value given for the Hasse arrow {}", rel.show_pair(p))));
    }
    let values = rel
        .pairs()
        .iter()
        .map(|&(x, y)| {
            let mut chain = rel.interval(x, y);
            let below = |a: usize| (0..rel.len()).filter(|&b| rel.relates(b, a)).count();
            chain.sort_by_key(|&a| below(a));
            let steps = chain.windows(2).map(|w| phi[&(w[0], w[1])]);
            g.product(steps).unwrap_or(identity)
        })
        .collect();
    RelationHomomorphism::new(rel, g, values)
}

/// σ = β ∪ γ for a preorder whose crosscuts have length at most two.
///
/// β lifts a grading set β̃ of the paired quotient through the chosen
/// representatives P and γ = {(p, x) : p ∈ P, x ∈ [p] ∖ {p}}.
#[derive(Clone, Debug)]
pub struct JonesLift {
    relation: Arc<FiniteRelation>,
    quotient: PairedQuotient,
    beta_tilde: Vec<Pair>,
    beta: Vec<Pair>,
    gamma: Vec<Pair>,
}

/// Builds σ from β̃ (pairs of the quotient) after checking the crosscut
/// hypothesis and that β̃ is a grading set of the quotient for each of
/// `groups`.
pub fn jones_lift(
    rel: Arc<FiniteRelation>,
    beta_tilde: &[Pair],
    representatives: Option<&[Atom]>,
    groups: &[Arc<Semigroup>],
    budget: Budget,
) -> Result<JonesLift> {
    if !rel.is_preorder() {
        return Err(Error::input("the lift requires a preorder"));
    }
    let length = rel.min_crosscut_length()?;
    if length > 2 {
        return Err(Error::refused(format!(
            "shortest crosscut has length {length}; the lift is only available for crosscuts of length at most 2"
        )));
    }
    let quotient = rel.paired_quotient(representatives)?;
    let mut beta_tilde = beta_tilde.to_vec();
    beta_tilde.sort_unstable();
    beta_tilde.dedup();
    for g in groups {
        let v = grading_set_verdict(&quotient.quotient, &beta_tilde, g, budget)?;
        if let Some(w) = &v.witness {
            return Err(Error::input(format!(
                "β̃ = {} is not a grading set of the quotient for {g}: {}",
                quotient.quotient.show_pairs(&beta_tilde),
                w.describe(&quotient.quotient, g)
            )));
        }
    }
    let mut beta: Vec<Pair> = beta_tilde.iter().map(|&p| quotient.lift(p)).collect();
    beta.sort_unstable();
    let mut gamma: Vec<Pair> = quotient
        .classes
        .iter()
        .enumerate()
        .flat_map(|(c, members)| {
            let p = quotient.representatives[c];
            members.iter().filter(move |&&x| x != p).map(move |&x| (p, x))
        })
        .collect();
    gamma.sort_unstable();
    Ok(JonesLift { relation: rel, quotient, beta_tilde, beta, gamma })
}

impl JonesLift {
    pub fn relation(&self) -> &Arc<FiniteRelation> {
        &self.relation
    }

    pub fn quotient(&self) -> &PairedQuotient {
        &self.quotient
    }

    pub fn beta_tilde(&self) -> &[Pair] {
        &self.beta_tilde
    }

    pub fn beta(&self) -> &[Pair] {
        &self.beta
    }

    pub fn gamma(&self) -> &[Pair] {
        &self.gamma
    }

    /// σ = β ∪ γ in canonical order.
    pub fn sigma(&self) -> Vec<Pair> {
        let mut s: Vec<Pair> = self.beta.iter().chain(&self.gamma).copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Extends φ : σ → G to ρ by
    /// Φ(x₁,x₂) = φ̄(p₁,x₁)⁻¹ · Ψ([p₁],[p₂]) · φ̄(p₂,x₂),
    /// where Ψ extends φ|β on the quotient and φ̄(p,p) = 1. The result is
    /// re-validated and must restrict to φ.
    pub fn extend(&self, g: &Arc<Semigroup>, phi: &BTreeMap<Pair, Degree>) -> Result<RelationHomomorphism> {
        if !g.is_group() {
            return Err(Error::refused(format!("{g} is not a group and the extension formula needs inverses")));
        }
        let sigma = self.sigma();
        if phi.keys().copied().collect::<Vec<_>>() != sigma {
            return Err(Error::input(format!("φ must be given exactly on σ = {}", self.relation.show_pairs(&sigma))));
        }
        let q = &self.quotient;
        let psi_on_beta: BTreeMap<Pair, Degree> = self.beta_tilde.iter().map(|&p| (p, phi[&q.lift(p)])).collect();
        let psi = self.quotient_extension(g, &psi_on_beta)?;
        let identity = g.identity().expect("groups have an identity");
        let bar = |x: usize| {
            let p = q.representatives[q.class_of[x]];
            if p == x { identity } else { phi[&(p, x)] }
        };
        let values = self
            .relation
            .pairs()
            .iter()
            .map(|&(x1, x2)| {
                let inv = g.inverse(bar(x1)).expect("groups have inverses");
                let middle = psi.value(q.project((x1, x2)));
                g.op(g.op(inv, middle), bar(x2))
            })
            .collect();
        let hom = RelationHomomorphism::new(Arc::clone(&self.relation), Arc::clone(g), values)?;
        if let Some((&p, _)) = phi.iter().find(|&(&p, &d)| hom.value(p) != d) {
            return Err(Error::NotFound(format!("extension does not restrict to φ at {}", self.relation.show_pair(p))));
        }
        Ok(hom)
    }

    fn quotient_extension(&self, g: &Arc<Semigroup>, psi: &BTreeMap<Pair, Degree>) -> Result<RelationHomomorphism> {
        let rel = Arc::new(self.quotient.quotient.clone());
        if g.order().is_none() {
            return hasse_extension(rel, Arc::clone(g), psi).map_err(|e| {
                Error::refused(format!("over an infinite group the quotient must be extended along Hasse arrows: {e}"))
            });
        }
        let solver = ExtensionSolver::new(&rel, g)?;
        let fixed: Vec<(usize, Degree)> = psi.iter().map(|(&(a, b), &d)| (rel.pair_id(a, b).expect("pair"), d)).collect();
        let mut sols = solver.solve(&fixed, 2);
        if sols.len() != 1 {
            return Err(Error::NotFound(format!("φ|β has {} extensions on the quotient", sols.len())));
        }
        RelationHomomorphism::new(rel, Arc::clone(g), sols.pop().expect("one solution"))
    }
}

/// Size k with |Hom(ρ, G)| = |G|^k, which any grading set must have.
fn forced_size(rel: &FiniteRelation, g: &Semigroup, budget: Budget) -> Result<(Option<usize>, Vec<Vec<Degree>>)> {
    let solver = ExtensionSolver::new(rel, g)?;
    let homs = solver.solve(&[], budget.max_enumeration.saturating_add(1) as usize);
    if homs.len() as u64 > budget.max_enumeration {
        return Err(Error::Budget(format!("more than {} homomorphisms into {g}", budget.max_enumeration)));
    }
    let order = g.order().expect("finite");
    let mut k = 0;
    let mut power = 1usize;
    while power < homs.len() {
        power *= order;
        k += 1;
    }
    Ok(((power == homs.len()).then_some(k), homs))
}

/// The first subset of at most `max_size` pairs that is a grading set for
/// every listed group, ordered by size, then by the interval sizes of its
/// pairs, then lexicographically. Diagonal pairs are skipped when all groups
/// are cancellative since their values are forced.
pub fn search_grading_set(
    rel: Arc<FiniteRelation>,
    groups: &[Arc<Semigroup>],
    max_size: usize,
    budget: Budget,
) -> Result<Option<GradingSubset>> {
    let mut size = None;
    let mut tables = Vec::new();
    for g in groups {
        if g.order() == Some(1) {
            continue;
        }
        let (k, homs) = forced_size(&rel, g, budget)?;
        let Some(k) = k else { return Ok(None) };
        if size.is_some_and(|s| s != k) {
            return Ok(None);
        }
        size = Some(k);
        tables.push(homs);
    }
    let k = size.unwrap_or(0);
    if k > max_size {
        return Ok(None);
    }
    let cancellative = groups.iter().all(|g| g.is_cancellative());
    let mut candidates: Vec<Pair> = rel.pairs().iter().copied().filter(|&(x, y)| !cancellative || x != y).collect();
    candidates.sort_by_key(|&(x, y)| (rel.interval(x, y).len(), (x, y)));
    let ids: Vec<usize> = candidates.iter().map(|&(x, y)| rel.pair_id(x, y).expect("pair")).collect();
    let injective = |chosen: &[usize]| {
        tables.iter().all(|homs| {
            let mut seen = HashSet::with_capacity(homs.len());
            homs.iter().all(|h| seen.insert(chosen.iter().map(|&c| h[ids[c]]).collect::<Vec<_>>()))
        })
    };
    for chosen in Combinations::new(candidates.len(), k) {
        if injective(&chosen) {
            let mut subset = GradingSubset::new(Arc::clone(&rel), chosen.iter().map(|&c| candidates[c]))?;
            subset.certify(groups, budget)?;
            if subset.certified() || groups.is_empty() {
                return Ok(Some(subset));
            }
        }
    }
    Ok(None)
}
