use std::collections::BTreeMap;
use std::sync::Arc;

use incidence_core::compression::{transport_grading_set, CompressionMap, Direction};
use incidence_core::extension::ExtensionSolver;
use incidence_core::fixtures;
use incidence_core::grading_sets::{default_test_groups, hasse_extension, search_grading_set};
use incidence_core::incidence::unit_associativity_oracle;
use incidence_core::io::{to_json, RelationFile};
use incidence_core::{
    Budget, CoefficientRing, Degree, Element, FiniteRelation, GradedEmbedding, IncidenceRing, ModInt, Pair, Semigroup,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn reflexive(max_atoms: usize) -> impl Strategy<Value = FiniteRelation> {
    (1..=max_atoms).prop_flat_map(|n| {
        let bits = n * (n - 1);
        (Just(n), 0u64..(1u64 << bits)).prop_map(|(n, m)| fixtures::reflexive_from_mask(n, m))
    })
}

fn balanced(max_atoms: usize) -> impl Strategy<Value = FiniteRelation> {
    reflexive(max_atoms).prop_filter("balanced", FiniteRelation::is_balanced)
}

fn element<R: incidence_core::Coefficient>(ring: &Arc<IncidenceRing<R>>, coeffs: &[i64]) -> Element<R> {
    let entries = ring.relation().pairs().iter().zip(coeffs.iter().cycle()).map(|(&p, &c)| (p, ring.scalar(c)));
    ring.element(entries).unwrap()
}

fn triple<R: incidence_core::Coefficient>(rel: &FiniteRelation, ring: CoefficientRing, c: &[i64]) -> [Element<R>; 3] {
    let ring = IncidenceRing::<R>::new(rel.clone(), ring).unwrap();
    let k = c.len() / 3;
    [element(&ring, &c[..k]), element(&ring, &c[k..2 * k]), element(&ring, &c[2 * k..])]
}

fn assert_ring_laws<R: incidence_core::Coefficient>([f, g, h]: [Element<R>; 3]) {
    let fg_h = f.convolve(&g).unwrap().convolve(&h).unwrap();
    let f_gh = f.convolve(&g.convolve(&h).unwrap()).unwrap();
    assert_eq!(fg_h, f_gh);
    let left = f.convolve(&g.add(&h).unwrap()).unwrap();
    assert_eq!(left, f.convolve(&g).unwrap().add(&f.convolve(&h).unwrap()).unwrap());
    let e = f.ring().identity().unwrap();
    assert_eq!(e.convolve(&f).unwrap(), f);
    assert_eq!(f.convolve(&e).unwrap(), f);
    assert!(f.sub(&f).unwrap().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn convolution_is_associative_on_balanced_relations(
        rel in balanced(5),
        c in prop::collection::vec(-4i64..5, 3..30),
    ) {
        assert_ring_laws::<BigInt>(triple(&rel, CoefficientRing::Integers, &c));
        assert_ring_laws::<ModInt>(triple(&rel, CoefficientRing::IntMod { n: 6 }, &c));
        assert_ring_laws::<BigRational>(triple(&rel, CoefficientRing::Rationals, &c));
    }

    #[test]
    fn balance_matches_the_oracle(rel in reflexive(5)) {
        prop_assert_eq!(rel.is_balanced(), unit_associativity_oracle(&rel).is_ok());
    }

    #[test]
    fn unbalanced_relations_refuse_convolution(rel in reflexive(4)) {
        let ring = IncidenceRing::<BigInt>::new(rel.clone(), CoefficientRing::Integers).unwrap();
        let e = ring.identity().unwrap();
        prop_assert_eq!(e.convolve(&e).is_ok(), rel.is_balanced());
    }

    #[test]
    fn sandwich_identity(rel in balanced(4), c in prop::collection::vec(-3i64..4, 1..12)) {
        let ring = IncidenceRing::<BigInt>::new(rel.clone(), CoefficientRing::Integers).unwrap();
        let f = element(&ring, &c);
        for &(x, y) in rel.pairs() {
            prop_assert!(f.sandwich_check(x, y).unwrap());
        }
    }

    #[test]
    fn paired_quotient_is_a_partial_order(rel in reflexive(5)) {
        let pre = rel.transitive_closure();
        let q = pre.paired_quotient(None).unwrap();
        prop_assert!(q.quotient.is_partial_order());
        for &(x, y) in pre.pairs() {
            prop_assert!(q.quotient.contains(q.project((x, y))));
        }
    }

    #[test]
    fn relation_json_is_canonical(rel in reflexive(5)) {
        let text = to_json(&RelationFile::from_relation(&rel));
        let back: RelationFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.build().unwrap(), rel.clone());
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn hasse_extension_restricts_to_phi(rel in reflexive(5), seed in any::<u64>()) {
        let poset = rel.transitive_closure();
        prop_assume!(poset.is_minimally_connected());
        let poset = Arc::new(poset);
        let g = Arc::new(Semigroup::symmetric3());
        let arrows = poset.hasse_arrows().unwrap();
        let phi: BTreeMap<Pair, Degree> =
            arrows.iter().enumerate().map(|(i, &p)| (p, Degree(((seed >> (3 * i)) % 6) as i64))).collect();
        let hom = hasse_extension(Arc::clone(&poset), Arc::clone(&g), &phi).unwrap();
        for (&p, &d) in &phi {
            prop_assert_eq!(hom.value(p), d);
        }
        let fixed: Vec<(usize, Degree)> = phi.iter().map(|(&(x, y), &d)| (poset.pair_id(x, y).unwrap(), d)).collect();
        let all = ExtensionSolver::new(&poset, &g).unwrap().solve(&fixed, 3);
        prop_assert_eq!(all, vec![hom.values().to_vec()]);
    }

    #[test]
    fn searched_grading_sets_avoid_the_diagonal(rel in reflexive(4)) {
        let pre = Arc::new(rel.transitive_closure());
        let groups = default_test_groups();
        if let Some(found) = search_grading_set(Arc::clone(&pre), &groups, 6, Budget::default()).unwrap() {
            prop_assert!(found.certified());
            prop_assert!(found.pairs().iter().all(|&(x, y)| x != y));
        }
    }

    #[test]
    fn embedding_is_injective(bits in 1u32..(1 << 9)) {
        let theta = CompressionMap::from_named(Arc::new(fixtures::fig2b()), Arc::new(fixtures::fig2a()), &fixtures::FIG2_THETA).unwrap();
        let h = GradedEmbedding::<ModInt>::new(theta, CoefficientRing::IntMod { n: 2 }).unwrap();
        let entries = h.domain().relation().pairs().iter().enumerate().map(|(i, &p)| (p, ModInt::new(i64::from(bits >> i & 1), 2)));
        let f = h.domain().element(entries).unwrap();
        prop_assert!(!f.is_zero());
        prop_assert!(!h.apply(&f).unwrap().is_zero());
    }

    #[test]
    fn transport_round_trip(mask in 0u32..(1 << 5)) {
        let theta = CompressionMap::from_named(Arc::new(fixtures::fig2b()), Arc::new(fixtures::fig2a()), &fixtures::FIG2_THETA).unwrap();
        let off: Vec<Pair> = theta.source().off_diagonal().collect();
        let subset: Vec<Pair> = off.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        let groups = [Arc::new(Semigroup::cyclic(2))];
        let there = transport_grading_set(&subset, &theta, Direction::Forward, &groups, Budget::default()).unwrap();
        let back = transport_grading_set(there.pairs(), &theta, Direction::Reverse, &groups, Budget::default()).unwrap();
        prop_assert_eq!(back.pairs(), &subset[..]);
        prop_assert_eq!(back.certified(), there.certified());
    }
}
