//! Generalized incidence rings I(X, ρ, R).
//!
//! An [`Element`] is a sparse function ρ → R with no stored zeros. Addition
//! and scalar action are componentwise; multiplication is convolution over
//! intervals,
//!
//! ```text
//! (f·g)(x, y) = Σ_{z ∈ [x, y]} f(x, z) g(z, y)   when xρy, else 0,
//! ```
//!
//! which is associative exactly when ρ is balanced. [`Element::convolve`]
//! therefore refuses unbalanced relations; [`Element::convolve_ungated`]
//! skips the gate and exists for the associativity oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::{Arc, OnceLock};

use crate::coefficient::{Coefficient, CoefficientRing};
use crate::error::{Error, Result};
use crate::relation::{BalanceViolation, FiniteRelation, Pair};

/// The ring I(X, ρ, R) for a fixed relation and coefficient ring.
pub struct IncidenceRing<R> {
    relation: Arc<FiniteRelation>,
    coefficients: CoefficientRing,
    balance: OnceLock<Result<(), BalanceViolation>>,
    _scalar: PhantomData<fn() -> R>,
}

impl<R> fmt::Debug for IncidenceRing<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({:?}, {})", self.relation, self.coefficients)
    }
}

impl<R: Coefficient> IncidenceRing<R> {
    pub fn new(relation: impl Into<Arc<FiniteRelation>>, coefficients: CoefficientRing) -> Result<Arc<Self>> {
        coefficients.validate()?;
        if !R::belongs_to(&coefficients) {
            return Err(Error::input(format!(
                "scalar type {} cannot represent {coefficients}",
                std::any::type_name::<R>()
            )));
        }
        Ok(Arc::new(IncidenceRing {
            relation: relation.into(),
            coefficients,
            balance: OnceLock::new(),
            _scalar: PhantomData,
        }))
    }

    pub fn relation(&self) -> &FiniteRelation {
        &self.relation
    }

    pub fn relation_arc(&self) -> &Arc<FiniteRelation> {
        &self.relation
    }

    pub fn coefficients(&self) -> CoefficientRing {
        self.coefficients
    }

    /// Balance of the underlying relation, computed once.
    pub fn balance(&self) -> Result<(), BalanceViolation> {
        *self.balance.get_or_init(|| self.relation.check_balanced())
    }

    fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.coefficients == other.coefficients && self.relation == other.relation)
    }

    pub fn one_scalar(&self) -> R {
        R::one_in(&self.coefficients)
    }

    pub fn scalar(&self, v: i64) -> R {
        R::from_i64_in(&self.coefficients, v)
    }

    pub fn zero(self: &Arc<Self>) -> Element<R> {
        Element { ring: Arc::clone(self), coeffs: BTreeMap::new() }
    }

    /// Builds an element from `(pair, coefficient)` entries. Repeated pairs
    /// are summed; every pair must lie in ρ.
    pub fn element(self: &Arc<Self>, entries: impl IntoIterator<Item = (Pair, R)>) -> Result<Element<R>> {
        let mut coeffs: BTreeMap<Pair, R> = BTreeMap::new();
        for (p, c) in entries {
            if !self.relation.contains(p) {
                return Err(Error::input(format!("{} is not in the relation", self.relation.show_pair(p))));
            }
            accumulate(&mut coeffs, p, c);
        }
        Ok(Element::pruned(Arc::clone(self), coeffs))
    }

    /// The diagonal-ones element e, the unity of the ring.
    pub fn identity(self: &Arc<Self>) -> Result<Element<R>> {
        if let Some(x) = (0..self.relation.len()).find(|&x| !self.relation.relates(x, x)) {
            return Err(Error::input(format!("relation is not reflexive at {}", self.relation.atom(x))));
        }
        let one = self.one_scalar();
        self.element((0..self.relation.len()).map(|x| ((x, x), one.clone())))
    }

    /// The standard unit e_xy.
    pub fn unit(self: &Arc<Self>, x: usize, y: usize) -> Result<Element<R>> {
        self.element([((x, y), self.one_scalar())])
    }

    pub fn unit_named(self: &Arc<Self>, x: &str, y: &str) -> Result<Element<R>> {
        let (x, y) = self.relation.pair_of(x, y)?;
        self.unit(x, y)
    }
}

fn accumulate<R: Coefficient>(coeffs: &mut BTreeMap<Pair, R>, p: Pair, c: R) {
    match coeffs.get_mut(&p) {
        Some(v) => *v = v.clone() + c,
        None => {
            coeffs.insert(p, c);
        }
    }
}

/// A function f : X × X → R supported on ρ.
#[derive(Clone)]
pub struct Element<R> {
    ring: Arc<IncidenceRing<R>>,
    coeffs: BTreeMap<Pair, R>,
}

impl<R: Coefficient> Element<R> {
    fn pruned(ring: Arc<IncidenceRing<R>>, mut coeffs: BTreeMap<Pair, R>) -> Self {
        coeffs.retain(|_, v| !v.is_zero());
        Element { ring, coeffs }
    }

    pub fn ring(&self) -> &Arc<IncidenceRing<R>> {
        &self.ring
    }

    pub fn relation(&self) -> &FiniteRelation {
        self.ring.relation()
    }

    /// f(x, y), zero off the support.
    pub fn get(&self, x: usize, y: usize) -> R {
        self.coeffs.get(&(x, y)).cloned().unwrap_or_else(R::zero)
    }

    /// Nonzero entries in canonical pair order.
    pub fn entries(&self) -> impl Iterator<Item = (Pair, &R)> + '_ {
        self.coeffs.iter().map(|(&p, c)| (p, c))
    }

    pub fn support(&self) -> Vec<Pair> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, other.ring)))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut coeffs = self.coeffs.clone();
        for (&p, c) in &other.coeffs {
            accumulate(&mut coeffs, p, c.clone());
        }
        Ok(Self::pruned(Arc::clone(&self.ring), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&p, c)| (p, -c.clone())).collect();
        Self::pruned(Arc::clone(&self.ring), coeffs)
    }

    /// (r f)(x, y) = r · f(x, y).
    pub fn scalar_mul(&self, r: &R) -> Self {
        let coeffs = self.coeffs.iter().map(|(&p, c)| (p, r.clone() * c.clone())).collect();
        Self::pruned(Arc::clone(&self.ring), coeffs)
    }

    /// Convolution product. Refuses when the relation is not balanced.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        self.ring
            .balance()
            .map_err(|v| Error::NotBalanced(v.describe(self.relation())))?;
        Ok(self.convolve_raw(other))
    }

    /// Convolution without the balance gate. On an unbalanced relation the
    /// result is well defined but the product is not associative.
    pub fn convolve_ungated(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        Ok(self.convolve_raw(other))
    }

    fn convolve_raw(&self, other: &Self) -> Self {
        let rel = self.relation();
        let mut rows: BTreeMap<usize, Vec<(usize, &R)>> = BTreeMap::new();
        for (&(z, y), c) in &other.coeffs {
            rows.entry(z).or_default().push((y, c));
        }
        let mut coeffs = BTreeMap::new();
        for (&(x, z), a) in &self.coeffs {
            let Some(row) = rows.get(&z) else { continue };
            for &(y, b) in row {
                // z ∈ [x, y] holds by the supports; xρy is the remaining condition
                if rel.relates(x, y) {
                    accumulate(&mut coeffs, (x, y), a.clone() * b.clone());
                }
            }
        }
        Self::pruned(Arc::clone(&self.ring), coeffs)
    }

    /// Checks f(x, y) e_xy = e_xx f e_yy for a pair of ρ.
    pub fn sandwich_check(&self, x: usize, y: usize) -> Result<bool> {
        let ring = &self.ring;
        let lhs = ring.unit(x, y)?.scalar_mul(&self.get(x, y));
        let rhs = ring.unit(x, x)?.convolve_ungated(self)?.convolve_ungated(&ring.unit(y, y)?)?;
        Ok(lhs == rhs)
    }

    /// Renders as `c·e_xy + …` using atom names.
    pub fn show(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let rel = self.relation();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&(x, y), c)| {
                let unit = format!("e[{},{}]", rel.atom(x), rel.atom(y));
                if *c == self.ring.one_scalar() {
                    unit
                } else {
                    format!("{c}·{unit}")
                }
            })
            .collect();
        terms.join(" + ")
    }
}

impl<R: Coefficient> PartialEq for Element<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.coeffs == other.coeffs
    }
}

impl<R: Coefficient> fmt::Debug for Element<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.show())
    }
}

/// A chain of units `(e_ab, e_bc, e_cd)` on which the bracketings differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonAssociativeUnits(pub [usize; 4]);

impl NonAssociativeUnits {
    pub fn describe(&self, rel: &FiniteRelation) -> String {
        let [a, b, c, d] = self.0.map(|i| rel.atom(i).to_string());
        format!("(e[{a},{b}]·e[{b},{c}])·e[{c},{d}] ≠ e[{a},{b}]·(e[{b},{c}]·e[{c},{d}])")
    }
}

/// Brute-force associativity of convolution on standard units.
///
/// Every triple `(e_ab, e_bc, e_cd)` of chained units is multiplied both
/// ways with the ungated convolution; unchained triples vanish under both
/// bracketings and are skipped. Returns the lexicographically least failing
/// chain. Intended for reflexive relations.
pub fn unit_associativity_oracle(relation: &FiniteRelation) -> Result<(), NonAssociativeUnits> {
    let ring = IncidenceRing::<num_bigint::BigInt>::new(relation.clone(), CoefficientRing::Integers)
        .expect("integers are always representable");
    let rel = ring.relation();
    let units: BTreeMap<Pair, Element<num_bigint::BigInt>> =
        rel.pairs().iter().map(|&(x, y)| ((x, y), ring.unit(x, y).expect("pair in relation"))).collect();
    let n = rel.len();
    let mul = |f: &Element<_>, g: &Element<_>| f.convolve_ungated(g).expect("same ring");
    for &(a, b) in rel.pairs() {
        for c in (0..n).filter(|&c| rel.relates(b, c)) {
            for d in (0..n).filter(|&d| rel.relates(c, d)) {
                let (ab, bc, cd) = (&units[&(a, b)], &units[&(b, c)], &units[&(c, d)]);
                if mul(&mul(ab, bc), cd) != mul(ab, &mul(bc, cd)) {
                    return Err(NonAssociativeUnits([a, b, c, d]));
                }
            }
        }
    }
    Ok(())
}

/// Tally of the exhaustive balance/associativity comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub atoms: usize,
    pub configurations: usize,
    pub agreeing: usize,
    pub balanced: usize,
}

impl SweepReport {
    pub fn all_agree(&self) -> bool {
        self.agreeing == self.configurations
    }
}

/// Compares [`FiniteRelation::is_balanced`] against
/// [`unit_associativity_oracle`] on every reflexive relation on `atoms`
/// elements. Work is split across the rayon pool and merged by summation.
pub fn sweep_balance_vs_associativity(atoms: usize) -> SweepReport {
    use rayon::prelude::*;
    let bits = atoms * atoms.saturating_sub(1);
    let configurations = 1usize << bits;
    let (agreeing, balanced) = (0..configurations as u64)
        .into_par_iter()
        .map(|mask| {
            let rel = crate::fixtures::reflexive_from_mask(atoms, mask);
            let b = rel.is_balanced();
            let assoc = unit_associativity_oracle(&rel).is_ok();
            (usize::from(b == assoc), usize::from(b))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    SweepReport { atoms, configurations, agreeing, balanced }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficient::ModInt;
    use crate::fixtures;
    use num_bigint::BigInt;

    fn int_ring(rel: FiniteRelation) -> Arc<IncidenceRing<BigInt>> {
        IncidenceRing::new(rel, CoefficientRing::Integers).unwrap()
    }

    #[test]
    fn additive_examples() {
        let ring = int_ring(fixtures::chain3());
        let f = ring.unit(0, 1).unwrap().add(&ring.unit(1, 2).unwrap().scalar_mul(&BigInt::from(5))).unwrap();
        assert!(f.add(&f.neg()).unwrap().is_zero());
        assert_eq!(f.scalar_mul(&BigInt::from(1)), f);

        let m2 = IncidenceRing::<ModInt>::new(fixtures::chain3(), CoefficientRing::IntMod { n: 2 }).unwrap();
        let e12 = m2.unit(0, 1).unwrap();
        assert!(e12.add(&e12).unwrap().is_zero());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = int_ring(fixtures::chain3());
        let b = int_ring(fixtures::square4());
        let err = a.unit(0, 1).unwrap().add(&b.unit(0, 1).unwrap()).unwrap_err();
        assert!(matches!(err, Error::RingMismatch(_)));

        let m2 = IncidenceRing::<ModInt>::new(fixtures::chain3(), CoefficientRing::IntMod { n: 2 }).unwrap();
        let m3 = IncidenceRing::<ModInt>::new(fixtures::chain3(), CoefficientRing::IntMod { n: 3 }).unwrap();
        assert!(m2.unit(0, 1).unwrap().convolve(&m3.unit(1, 2).unwrap()).is_err());
        assert!(IncidenceRing::<BigInt>::new(fixtures::chain3(), CoefficientRing::Rationals).is_err());
    }

    #[test]
    fn chain3_products() {
        let ring = int_ring(fixtures::chain3());
        let e = |x: &str, y: &str| ring.unit_named(x, y).unwrap();
        let f = e("1", "2").add(&e("2", "3")).unwrap();
        assert_eq!(f.convolve(&f).unwrap(), e("1", "3"));
        assert_eq!(e("1", "2").convolve(&e("2", "3")).unwrap(), e("1", "3"));
        assert!(e("2", "3").convolve(&e("1", "2")).unwrap().is_zero());
    }

    #[test]
    fn fig2a_product_vanishes_without_outer_pair() {
        let ring = int_ring(fixtures::fig2a());
        assert!(!ring.relation().relates(0, 2));
        let p = ring.unit_named("1", "2").unwrap().convolve(&ring.unit_named("2", "3").unwrap()).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn identity_laws() {
        let ring = int_ring(fixtures::chain3());
        let e = ring.identity().unwrap();
        assert_eq!(e.support(), vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(e.convolve(&e).unwrap(), e);
        let e12 = ring.unit(0, 1).unwrap();
        assert_eq!(e.convolve(&e12).unwrap(), e12);
        assert_eq!(e12.convolve(&e).unwrap(), e12);
        for w in 0..3 {
            let eww = ring.unit(w, w).unwrap();
            assert_eq!(eww.convolve(&eww).unwrap(), eww);
        }

        let nonrefl = FiniteRelation::new(["1", "2"], [("1", "1")]).unwrap();
        assert!(int_ring(nonrefl).identity().is_err());
    }

    #[test]
    fn unit_outside_relation_is_an_error() {
        let ring = int_ring(fixtures::chain3());
        assert!(ring.unit(2, 0).is_err());
    }

    #[test]
    fn convolution_refuses_unbalanced() {
        let ring = int_ring(fixtures::unbalanced4());
        let err = ring.unit(0, 1).unwrap().convolve(&ring.unit(1, 2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotBalanced(_)));
        assert!(ring.unit(0, 1).unwrap().convolve_ungated(&ring.unit(1, 2).unwrap()).is_ok());
    }

    #[test]
    fn sandwich_examples() {
        let ring = int_ring(fixtures::chain3());
        let e12 = ring.unit(0, 1).unwrap();
        assert!(e12.sandwich_check(0, 1).unwrap());
        assert!(e12.sandwich_check(1, 2).unwrap());
        let f = ring
            .element(ring.relation().pairs().iter().enumerate().map(|(k, &p)| (p, BigInt::from(k as i64 + 2))))
            .unwrap();
        assert!(f.sandwich_check(0, 2).unwrap());
    }

    #[test]
    fn oracle_examples() {
        assert!(unit_associativity_oracle(&fixtures::chain3()).is_ok());
        let bad = fixtures::unbalanced4();
        assert_eq!(unit_associativity_oracle(&bad), Err(NonAssociativeUnits([0, 1, 2, 3])));
        // left bracketing gives e14, right gives 0
        let ring = int_ring(bad);
        let u = |x, y| ring.unit(x, y).unwrap();
        let left = u(0, 1).convolve_ungated(&u(1, 2)).unwrap().convolve_ungated(&u(2, 3)).unwrap();
        let right = u(0, 1).convolve_ungated(&u(1, 2).convolve_ungated(&u(2, 3)).unwrap()).unwrap();
        assert_eq!(left, u(0, 3));
        assert!(right.is_zero());
    }

    #[test]
    fn sweep_on_three_atoms() {
        let report = sweep_balance_vs_associativity(3);
        assert_eq!(report.configurations, 64);
        assert!(report.all_agree());
    }

    #[test]
    fn show_uses_atom_names() {
        let ring = int_ring(fixtures::chain3());
        let f = ring.element([((0, 1), BigInt::from(1)), ((1, 2), BigInt::from(-2))]).unwrap();
        assert_eq!(f.show(), "e[1,2] + -2·e[2,3]");
        assert_eq!(ring.zero().show(), "0");
    }
}
