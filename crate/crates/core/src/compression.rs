//! Compression maps θ : (X₂, ρ₂) → (X₁, ρ₁).
//!
//! A compression is surjective and relation-preserving (condition 1), every
//! transitive triple of X₁ is the image of one of X₂ (condition 2), and θ
//! restricts to a bijection θ* : ρ₂* → ρ₁* of off-diagonal pairs
//! (condition 3). Homomorphisms pull back along θ, which gives an injective
//! graded embedding of incidence rings in the opposite direction.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::coefficient::{Coefficient, CoefficientRing};
use crate::error::{Error, Result};
use crate::grading::RelationHomomorphism;
use crate::grading_sets::{Budget, GradingSubset};
use crate::incidence::{Element, IncidenceRing};
use crate::relation::{Atom, FiniteRelation, Pair};
use crate::semigroup::Semigroup;

/// A verified compression map.
#[derive(Clone, Debug)]
pub struct CompressionMap {
    source: Arc<FiniteRelation>,
    target: Arc<FiniteRelation>,
    theta: Vec<usize>,
    star: BTreeMap<Pair, Pair>,
    star_inverse: BTreeMap<Pair, Pair>,
}

fn violation(condition: u8, detail: String) -> Error {
    Error::NotACompression { condition, detail }
}

/// Checks conditions 1, 3 and 2 in that order and reports the first failure.
pub fn verify_compression(
    source: Arc<FiniteRelation>,
    target: Arc<FiniteRelation>,
    theta: Vec<usize>,
) -> Result<CompressionMap> {
    if theta.len() != source.len() {
        return Err(Error::input(format!("θ must be defined on all {} source elements", source.len())));
    }
    if theta.iter().any(|&t| t >= target.len()) {
        return Err(Error::input("θ maps outside the target"));
    }
    let (s, t) = (&source, &target);
    let show_map = |x: usize| format!("θ({}) = {}", s.atom(x), t.atom(theta[x]));

    let mut hit = vec![false; t.len()];
    for &y in &theta {
        hit[y] = true;
    }
    if let Some(y) = hit.iter().position(|h| !h) {
        return Err(violation(1, format!("{} has no preimage, θ is not surjective", t.atom(y))));
    }
    if let Some(&(x, y)) = s.pairs().iter().find(|&&(x, y)| !t.relates(theta[x], theta[y])) {
        return Err(violation(
            1,
            format!("{} ∈ ρ₂ but {} ∉ ρ₁ ({}, {})", s.show_pair((x, y)), t.show_pair((theta[x], theta[y])), show_map(x), show_map(y)),
        ));
    }

    let mut star = BTreeMap::new();
    let mut star_inverse: BTreeMap<Pair, Pair> = BTreeMap::new();
    for (x, y) in s.off_diagonal() {
        let image = (theta[x], theta[y]);
        if image.0 == image.1 {
            return Err(violation(3, format!("{} ∈ ρ₂* is sent to the diagonal pair {}", s.show_pair((x, y)), t.show_pair(image))));
        }
        if let Some(&other) = star_inverse.get(&image) {
            return Err(violation(
                3,
                format!("{} and {} both map to {}, θ* is not injective", s.show_pair(other), s.show_pair((x, y)), t.show_pair(image)),
            ));
        }
        star.insert((x, y), image);
        star_inverse.insert(image, (x, y));
    }
    if let Some(p) = t.off_diagonal().find(|p| !star_inverse.contains_key(p)) {
        return Err(violation(3, format!("{} ∈ ρ₁* has no preimage, θ* is not surjective", t.show_pair(p))));
    }

    let lifted: BTreeSet<[usize; 3]> = s
        .transitive_triples()
        .into_iter()
        .map(|[x, y, z]| [theta[x], theta[y], theta[z]])
        .collect();
    if let Some([a, b, c]) = t.transitive_triples().into_iter().find(|tr| !lifted.contains(tr)) {
        return Err(violation(
            2,
            format!("transitive triple ({},{},{}) of X₁ is not the image of a transitive triple of X₂", t.atom(a), t.atom(b), t.atom(c)),
        ));
    }
    Ok(CompressionMap { source, target, theta, star, star_inverse })
}

impl CompressionMap {
    /// θ given by `(source atom, target atom)` names; every source atom must
    /// appear exactly once.
    pub fn from_named<S: AsRef<str>>(
        source: Arc<FiniteRelation>,
        target: Arc<FiniteRelation>,
        map: &[(S, S)],
    ) -> Result<Self> {
        let mut theta = vec![None; source.len()];
        for (a, b) in map {
            let x = source.index_of(a.as_ref())?;
            let y = target.index_of(b.as_ref())?;
            if theta[x].replace(y).is_some() {
                return Err(Error::input(format!("θ({}) is given twice", a.as_ref())));
            }
        }
        let theta = theta
            .iter()
            .enumerate()
            .map(|(x, t)| t.ok_or_else(|| Error::input(format!("θ({}) is not given", source.atom(x)))))
            .collect::<Result<Vec<_>>>()?;
        verify_compression(source, target, theta)
    }

    pub fn identity(rel: Arc<FiniteRelation>) -> Result<Self> {
        let theta = (0..rel.len()).collect();
        verify_compression(Arc::clone(&rel), rel, theta)
    }

    pub fn source(&self) -> &Arc<FiniteRelation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteRelation> {
        &self.target
    }

    pub fn theta(&self) -> &[usize] {
        &self.theta
    }

    pub fn apply(&self, x: usize) -> usize {
        self.theta[x]
    }

    /// θ* on an off-diagonal pair of ρ₂.
    pub fn star(&self, p: Pair) -> Option<Pair> {
        self.star.get(&p).copied()
    }

    /// (θ*)⁻¹ on an off-diagonal pair of ρ₁.
    pub fn star_inverse(&self, p: Pair) -> Option<Pair> {
        self.star_inverse.get(&p).copied()
    }

    /// `(source atom, target atom)` in source order.
    pub fn named(&self) -> Vec<(Atom, Atom)> {
        self.theta
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.source.atom(x).clone(), self.target.atom(y).clone()))
            .collect()
    }

    /// First pair x ρ₂ y with θ([x, y]) ≠ [θx, θy].
    pub fn interval_image_violation(&self) -> Option<Pair> {
        self.source.pairs().iter().copied().find(|&(x, y)| {
            let image: BTreeSet<usize> = self.source.interval(x, y).into_iter().map(|z| self.theta[z]).collect();
            let want: BTreeSet<usize> = self.target.interval(self.theta[x], self.theta[y]).into_iter().collect();
            image != want
        })
    }
}

/// Φ₂(x, y) = Φ₁(θx, θy), re-validated on ρ₂.
pub fn induce_hom_through(phi: &RelationHomomorphism, theta: &CompressionMap) -> Result<RelationHomomorphism> {
    if phi.relation().as_ref() != theta.target().as_ref() {
        return Err(Error::input("the homomorphism must be defined on the target of θ"));
    }
    let values = theta
        .source()
        .pairs()
        .iter()
        .map(|&(x, y)| phi.value((theta.apply(x), theta.apply(y))))
        .collect();
    RelationHomomorphism::new(Arc::clone(theta.source()), Arc::clone(phi.target()), values)
}

/// h : I(X₁, ρ₁, R) → I(X₂, ρ₂, R), h(f)(x, y) = f(θx, θy) for x ρ₂ y.
#[derive(Clone, Debug)]
pub struct GradedEmbedding<R> {
    theta: CompressionMap,
    domain: Arc<IncidenceRing<R>>,
    codomain: Arc<IncidenceRing<R>>,
}

impl<R: Coefficient> GradedEmbedding<R> {
    pub fn new(theta: CompressionMap, coefficients: CoefficientRing) -> Result<Self> {
        let domain = IncidenceRing::new(Arc::clone(theta.target()), coefficients)?;
        let codomain = IncidenceRing::new(Arc::clone(theta.source()), coefficients)?;
        Ok(GradedEmbedding { theta, domain, codomain })
    }

    /// The ring over ρ₁.
    pub fn domain(&self) -> &Arc<IncidenceRing<R>> {
        &self.domain
    }

    /// The ring over ρ₂.
    pub fn codomain(&self) -> &Arc<IncidenceRing<R>> {
        &self.codomain
    }

    pub fn theta(&self) -> &CompressionMap {
        &self.theta
    }

    pub fn apply(&self, f: &Element<R>) -> Result<Element<R>> {
        if f.relation() != self.domain.relation() || f.ring().coefficients() != self.domain.coefficients() {
            return Err(Error::RingMismatch("h applies to elements over the target of θ".into()));
        }
        let theta = &self.theta;
        self.codomain.element(
            theta
                .source()
                .pairs()
                .iter()
                .map(|&(x, y)| ((x, y), f.get(theta.apply(x), theta.apply(y)))),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// σ₂ ⊆ ρ₂* to θ*(σ₂) ⊆ ρ₁*.
    Forward,
    /// σ₁ ⊆ ρ₁* to (θ*)⁻¹(σ₁) ⊆ ρ₂*.
    Reverse,
}

/// Moves an off-diagonal subset across θ* and certifies the result for every
/// listed group. All groups must be cancellative.
pub fn transport_grading_set(
    pairs: &[Pair],
    theta: &CompressionMap,
    direction: Direction,
    groups: &[Arc<Semigroup>],
    budget: Budget,
) -> Result<GradingSubset> {
    if let Some(g) = groups.iter().find(|g| !g.is_cancellative()) {
        return Err(Error::refused(format!(
            "{g} is not cancellative; grading sets are only transported along θ* for cancellative groups"
        )));
    }
    let (from, to) = match direction {
        Direction::Forward => (theta.source(), theta.target()),
        Direction::Reverse => (theta.target(), theta.source()),
    };
    let moved = pairs
        .iter()
        .map(|&p| {
            let image = match direction {
                Direction::Forward => theta.star(p),
                Direction::Reverse => theta.star_inverse(p),
            };
            image.ok_or_else(|| Error::input(format!("{} is not an off-diagonal pair of the relation", from.show_pair(p))))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut subset = GradingSubset::new(Arc::clone(to), moved)?;
    subset.certify(groups, budget)?;
    Ok(subset)
}

/// A preorder Y compressing onto a stable relation whose clasps are all
/// unlocked.
///
/// Each clasp x is first split into x (keeping the arrows into x) and a copy
/// x′ (taking the arrows out of x); the transitive closure of the result is
/// kept if it verifies. Otherwise clasps are given extra copies, fewest
/// first, and every choice of preimage pair for ρ₁* is searched, pruning on
/// transitivity, within the budget. One copy per clasp is not always
/// enough. Whatever is returned has passed
/// [`verify_compression`].
pub fn split_clasps(rel: Arc<FiniteRelation>, budget: Budget) -> Result<CompressionMap> {
    rel.check_stable()
        .map_err(|v| Error::input(format!("relation is not stable: {}", v.describe(&rel))))?;
    let clasps: Vec<usize> = rel.clasps().into_iter().map(|(x, _)| x).collect();
    if let Some(&x) = clasps.iter().find(|&&x| rel.is_locked_clasp(x)) {
        return Err(Error::input(format!("clasp {} is locked", rel.atom(x))));
    }
    if clasps.is_empty() {
        return CompressionMap::identity(rel);
    }
    if let Some(found) = split_heuristic(&rel, &clasps) {
        return Ok(found);
    }
    // A clasp may need several copies, at most one per incident arrow.
    let capacity: Vec<usize> = clasps
        .iter()
        .map(|&x| rel.off_diagonal().filter(|&(a, b)| a == x || b == x).count().saturating_sub(1).max(1))
        .collect();
    let max_extra: usize = capacity.iter().sum();
    let mut nodes = 0u64;
    for extra in 1..=max_extra {
        for counts in distributions(&capacity, extra) {
            let copies: Vec<usize> = clasps.iter().zip(&counts).flat_map(|(&x, &k)| std::iter::repeat_n(x, k)).collect();
            if let Some(found) = split_search(&rel, &copies, &mut nodes, budget)? {
                return Ok(found);
            }
        }
    }
    Err(Error::NotFound(format!(
        "no preorder on at most {} elements compresses onto this relation",
        rel.len() + max_extra
    )))
}

/// Every way to write `total` as a sum with the i-th term in `0..=cap[i]`,
/// in lexicographic order.
fn distributions(cap: &[usize], total: usize) -> Vec<Vec<usize>> {
    fn go(cap: &[usize], total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == cap.len() {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let rest: usize = cap[prefix.len() + 1..].iter().sum();
        for k in 0..=cap[prefix.len()].min(total) {
            if total - k <= rest {
                prefix.push(k);
                go(cap, total - k, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(cap, total, &mut Vec::new(), &mut out);
    out
}

/// Atoms of X followed by a primed copy of each duplicated element.
fn split_atoms(rel: &FiniteRelation, copies: &[usize]) -> (Vec<Atom>, Vec<usize>) {
    let mut atoms: Vec<Atom> = rel.atoms().to_vec();
    let mut theta: Vec<usize> = (0..rel.len()).collect();
    for &x in copies {
        let mut name = format!("{}'", rel.atom(x));
        while atoms.iter().any(|a| a.as_str() == name) {
            name.push('\'');
        }
        atoms.push(Atom::new(name));
        theta.push(x);
    }
    (atoms, theta)
}

/// Builds the relation on the split atoms from chosen off-diagonal pairs
/// (indices into the unsorted atom list) and re-indexes it canonically.
fn assemble(
    rel: &Arc<FiniteRelation>,
    atoms: &[Atom],
    theta: &[usize],
    pairs: impl IntoIterator<Item = Pair>,
    close: bool,
) -> Option<CompressionMap> {
    let names: Vec<&str> = atoms.iter().map(Atom::as_str).collect();
    let named: Vec<(&str, &str)> = pairs.into_iter().map(|(a, b)| (names[a], names[b])).collect();
    let y = FiniteRelation::new(names.iter().copied(), named).ok()?.reflexive_closure();
    let y = if close { y.transitive_closure() } else { y };
    if !y.is_preorder() {
        return None;
    }
    let theta: Vec<usize> = y
        .atoms()
        .iter()
        .map(|a| theta[atoms.iter().position(|b| b == a).expect("same atoms")])
        .collect();
    verify_compression(Arc::new(y), Arc::clone(rel), theta).ok()
}

fn split_heuristic(rel: &Arc<FiniteRelation>, clasps: &[usize]) -> Option<CompressionMap> {
    let (atoms, theta) = split_atoms(rel, clasps);
    let copy_of = |x: usize| clasps.iter().position(|&c| c == x).map_or(x, |k| rel.len() + k);
    let pairs: Vec<Pair> = rel.off_diagonal().map(|(a, b)| (copy_of(a), b)).collect();
    assemble(rel, &atoms, &theta, pairs, true)
}

fn split_search(rel: &Arc<FiniteRelation>, copies: &[usize], nodes: &mut u64, budget: Budget) -> Result<Option<CompressionMap>> {
    let (atoms, theta) = split_atoms(rel, copies);
    let m = atoms.len();
    let preimages = |x: usize| -> Vec<usize> { (0..m).filter(|&u| theta[u] == x).collect() };
    let targets: Vec<Pair> = rel.off_diagonal().collect();
    let options: Vec<Vec<Pair>> = targets
        .iter()
        .map(|&(a, b)| {
            let ends = preimages(b);
            preimages(a).into_iter().flat_map(|u| ends.iter().map(move |&v| (u, v))).collect()
        })
        .collect();
    let index: BTreeMap<Pair, usize> = targets.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    let mut adjacency = vec![vec![false; m]; m];
    for (u, row) in adjacency.iter_mut().enumerate() {
        row[u] = true;
    }
    let mut search = SplitSearch {
        rel,
        atoms: &atoms,
        theta: &theta,
        options: &options,
        index: &index,
        chosen: vec![None; targets.len()],
        adjacency,
        nodes,
        budget,
    };
    search.run(0)
}

struct SplitSearch<'a> {
    rel: &'a Arc<FiniteRelation>,
    atoms: &'a [Atom],
    theta: &'a [usize],
    options: &'a [Vec<Pair>],
    index: &'a BTreeMap<Pair, usize>,
    chosen: Vec<Option<Pair>>,
    adjacency: Vec<Vec<bool>>,
    nodes: &'a mut u64,
    budget: Budget,
}

impl SplitSearch<'_> {
    /// Whether u → w may be present once every choice is made.
    fn allowed(&self, u: usize, w: usize) -> bool {
        if u == w {
            return true;
        }
        let image = (self.theta[u], self.theta[w]);
        if image.0 == image.1 || !self.rel.relates(image.0, image.1) {
            return false;
        }
        self.chosen[self.index[&image]].is_none_or(|c| c == (u, w))
    }

    /// Adding u → v leaves every forced transitive consequence achievable.
    fn consistent(&self, (u, v): Pair) -> bool {
        let m = self.adjacency.len();
        (0..m).all(|w| !self.adjacency[v][w] || self.allowed(u, w))
            && (0..m).all(|t| !self.adjacency[t][u] || self.allowed(t, v))
    }

    fn run(&mut self, i: usize) -> Result<Option<CompressionMap>> {
        if i == self.options.len() {
            let pairs = self.chosen.iter().map(|c| c.expect("complete"));
            return Ok(assemble(self.rel, self.atoms, self.theta, pairs, false));
        }
        for k in 0..self.options[i].len() {
            *self.nodes += 1;
            if *self.nodes > self.budget.max_enumeration {
                return Err(Error::Budget(format!("clasp splitting explored {} candidates", self.budget.max_enumeration)));
            }
            let (u, v) = self.options[i][k];
            if !self.allowed(u, v) {
                continue;
            }
            self.chosen[i] = Some((u, v));
            self.adjacency[u][v] = true;
            if self.consistent((u, v)) {
                if let Some(found) = self.run(i + 1)? {
                    return Ok(Some(found));
                }
            }
            self.adjacency[u][v] = false;
            self.chosen[i] = None;
        }
        Ok(None)
    }
}

/// A bijection X_a → X_b carrying ρ_a onto ρ_b and satisfying `extra`, if
/// one exists. The first found in lexicographic order of images is returned.
fn isomorphism(a: &FiniteRelation, b: &FiniteRelation, extra: &dyn Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    fn extend(
        a: &FiniteRelation,
        b: &FiniteRelation,
        extra: &dyn Fn(usize, usize) -> bool,
        map: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let x = map.len();
        if x == a.len() {
            return true;
        }
        for y in 0..b.len() {
            if used[y] || !extra(x, y) {
                continue;
            }
            let fits = (0..x).all(|w| a.relates(w, x) == b.relates(map[w], y) && a.relates(x, w) == b.relates(y, map[w]))
                && a.relates(x, x) == b.relates(y, y);
            if fits {
                map.push(y);
                used[y] = true;
                if extend(a, b, extra, map, used) {
                    return true;
                }
                used[y] = false;
                map.pop();
            }
        }
        false
    }
    if a.len() != b.len() || a.pair_count() != b.pair_count() {
        return None;
    }
    let mut map = Vec::with_capacity(a.len());
    let mut used = vec![false; b.len()];
    extend(a, b, extra, &mut map, &mut used).then_some(map)
}

/// An isomorphism of relations, as element indices of `b`.
pub fn relation_isomorphism(a: &FiniteRelation, b: &FiniteRelation) -> Option<Vec<usize>> {
    isomorphism(a, b, &|_, _| true)
}

/// Whether two compressions onto the same relation differ only by a
/// relabelling of their sources: some isomorphism σ has θ_b ∘ σ = θ_a.
pub fn equivalent_compressions(a: &CompressionMap, b: &CompressionMap) -> bool {
    a.target() == b.target() && isomorphism(a.source(), b.source(), &|x, y| a.apply(x) == b.apply(y)).is_some()
}
