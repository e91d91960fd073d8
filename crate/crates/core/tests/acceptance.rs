//! Acceptance checks 1 to 9, one PASS/FAIL line each. All comparisons are
//! exact; the only tolerances are the wall-clock limits below.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use incidence_core::compression::{equivalent_compressions, induce_hom_through, split_clasps};
use incidence_core::demo;
use incidence_core::extension::ExtensionSolver;
use incidence_core::fixtures;
use incidence_core::grading::{extract_homomorphism, induce_grading, infinite_support_report};
use incidence_core::grading_sets::{default_test_groups, grading_set_verdict, hasse_extension, jones_lift, search_grading_set};
use incidence_core::incidence::sweep_balance_vs_associativity;
use incidence_core::relation::ClaspKind;
use incidence_core::{
    Budget, CoefficientRing, CompressionMap, Degree, FiniteRelation, GradedEmbedding, GradingSubset, IncidenceRing, ModInt,
    Pair, RelationHomomorphism, Semigroup,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SWEEP_LIMIT: Duration = Duration::from_secs(30);
const HASSE_LIMIT: Duration = Duration::from_secs(60);
const SEED: u64 = 20_241_019;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn random_relation(rng: &mut ChaCha8Rng, n: usize, density: f64) -> FiniteRelation {
    FiniteRelation::on_range(n, |i, j| i == j || rng.gen_bool(density))
}

/// Random connected posets whose intervals are chains, by rejection.
fn minimally_connected_corpus(rng: &mut ChaCha8Rng, count: usize) -> Vec<FiniteRelation> {
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=6);
        let perm = {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            p
        };
        let density = rng.gen_range(0.2..0.6);
        let dag = FiniteRelation::on_range(n, |i, j| i == j || (perm[i] < perm[j] && rng.gen_bool(density)));
        let rel = dag.transitive_closure();
        if rel.is_minimally_connected() {
            out.push(rel);
        }
    }
    out
}

fn preorder_corpus(rng: &mut ChaCha8Rng, count: usize) -> Vec<FiniteRelation> {
    let mut out: Vec<FiniteRelation> = vec![fixtures::fig2b(), fixtures::chain3()];
    while out.len() < count {
        let n = rng.gen_range(2..=6);
        let density = rng.gen_range(0.1..0.35);
        let rel = random_relation(rng, n, density).transitive_closure();
        if rel.min_crosscut_length().unwrap() <= 2 && rel.paired_quotient(None).unwrap().quotient.len() < n && !out.contains(&rel) {
            out.push(rel);
        }
    }
    out
}

fn all_homs(rel: &FiniteRelation, g: &Semigroup, limit: usize) -> Vec<Vec<Degree>> {
    ExtensionSolver::new(rel, g).unwrap().solve(&[], limit)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let report = sweep_balance_vs_associativity(4);
    let elapsed = start.elapsed();
    ensure(report.configurations == 4096, || format!("{} configurations", report.configurations))?;
    ensure(report.all_agree(), || format!("{}/4096 agree", report.agreeing))?;
    ensure(report.balanced == 849, || format!("{} balanced, expected 849", report.balanced))?;
    ensure(elapsed <= SWEEP_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("4096/4096 agree, 849 balanced, {:.1}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut relations: Vec<FiniteRelation> = fixtures::all_reflexive(3).collect();
    relations.extend([fixtures::fig2a(), fixtures::fig2b(), fixtures::unbalanced4(), fixtures::diamond(), fixtures::square4()]);
    let mut products = 0;
    for rel in &relations {
        let ring = IncidenceRing::<BigInt>::new(rel.clone(), CoefficientRing::Integers).unwrap();
        for &(x, y) in rel.pairs() {
            for &(z, w) in rel.pairs() {
                let got = ring.unit(x, y).unwrap().convolve_ungated(&ring.unit(z, w).unwrap()).unwrap();
                let want = if y == z && rel.relates(x, w) { ring.unit(x, w).unwrap() } else { ring.zero() };
                ensure(got == want, || format!("{rel:?}: e[{x},{y}]·e[{z},{w}] = {}", got.show()))?;
                products += 1;
            }
        }
    }
    Ok(format!("{products} unit products over {} relations", relations.len()))
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Outcome {
    let mut corpus: Vec<FiniteRelation> = vec![fixtures::chain3(), fixtures::fig2a(), fixtures::fig2b(), fixtures::fig2c(), fixtures::square4()];
    corpus.extend(minimally_connected_corpus(rng, 10));
    let groups = [Semigroup::cyclic(2), Semigroup::cyclic(3), Semigroup::symmetric3(), Semigroup::klein4()];
    let mut checked = 0;
    for rel in corpus.into_iter().filter(FiniteRelation::is_balanced) {
        let rel = Arc::new(rel);
        let ring = IncidenceRing::<BigInt>::new(Arc::clone(&rel), CoefficientRing::Integers).unwrap();
        for g in &groups {
            let g = Arc::new(g.clone());
            for values in all_homs(&rel, &g, 60) {
                let hom = RelationHomomorphism::new(Arc::clone(&rel), Arc::clone(&g), values).unwrap();
                let grading = induce_grading(&hom, &ring).map_err(|e| e.to_string())?;
                ensure(grading.verify_component_closure().is_ok(), || format!("closure fails on {rel:?} over {g}"))?;
                let back = extract_homomorphism(&grading).map_err(|e| e.to_string())?;
                ensure(back == hom, || format!("round trip differs on {rel:?} over {g}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (relation, group, Φ) round trips"))
}

fn criterion_4(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let corpus = minimally_connected_corpus(rng, 50);
    let mut assignments = 0u64;
    for rel in corpus {
        let rel = Arc::new(rel);
        let arrows = rel.hasse_arrows().unwrap();
        for g in [Semigroup::cyclic(2), Semigroup::cyclic(3)] {
            let v = grading_set_verdict(&rel, &arrows, &g, Budget::default()).map_err(|e| e.to_string())?;
            ensure(v.is_grading_set(), || format!("{rel:?} over {g}: {:?}", v.witness))?;
            let solver = ExtensionSolver::new(&rel, &g).unwrap();
            let g = Arc::new(g.clone());
            let n = g.order().unwrap() as u64;
            for code in 0..n.pow(arrows.len() as u32) {
                let mut c = code;
                let phi: BTreeMap<Pair, Degree> = arrows
                    .iter()
                    .rev()
                    .map(|&p| {
                        let d = Degree((c % n) as i64);
                        c /= n;
                        (p, d)
                    })
                    .collect();
                let fixed: Vec<(usize, Degree)> = phi.iter().map(|(&(x, y), &d)| (rel.pair_id(x, y).unwrap(), d)).collect();
                let found = solver.solve(&fixed, 2);
                let built = hasse_extension(Arc::clone(&rel), Arc::clone(&g), &phi).map_err(|e| e.to_string())?;
                ensure(found == vec![built.values().to_vec()], || format!("{rel:?}: φ = {phi:?}"))?;
                assignments += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= HASSE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("50 posets, {assignments} assignments each extended exactly once, {:.1}s", elapsed.as_secs_f64()))
}

fn criterion_5() -> Outcome {
    let r = demo::fig2(Budget::default()).map_err(|e| e.to_string())?;
    let (a, b, c) = (fixtures::fig2a(), fixtures::fig2b(), fixtures::fig2c());
    let named = |rel: &FiniteRelation, p: &[(&str, &str)]| demo::named(rel, p).unwrap();
    ensure(r.clasps == vec![("2".into(), ClaspKind::Unlocked)], || format!("clasps {:?}", r.clasps))?;
    ensure(r.compression_verified, || "θ rejected".into())?;
    ensure(r.quotient_grading_set == named(&c, &[("1", "2"), ("3", "4")]), || format!("{:?}", r.quotient_grading_set))?;
    ensure(r.sigma2 == named(&b, &[("1", "2"), ("3", "4"), ("4", "5")]), || format!("σ₂ = {:?}", r.sigma2))?;
    ensure(r.sigma1 == named(&a, &[("1", "2"), ("2", "3"), ("3", "4")]), || format!("σ₁ = {:?}", r.sigma1))?;
    let groups: Vec<&str> = r.sigma1_verdicts.iter().filter(|(_, ok)| *ok).map(|(g, _)| g.as_str()).collect();
    ensure(groups == ["Z2", "Z3", "S3"], || format!("σ₁ certified for {groups:?}"))?;
    Ok("clasp (2, unlocked), θ valid, σ₃, σ₂, σ₁ match; σ₁ certified for Z2, Z3, S3".into())
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Outcome {
    let groups = default_test_groups();
    let budget = Budget::default();
    let mut lifted = 0;
    let mut compared = 0u64;
    for rel in preorder_corpus(rng, 24) {
        let rel = Arc::new(rel);
        let q = Arc::new(rel.paired_quotient(None).unwrap().quotient);
        let Some(bt) = search_grading_set(Arc::clone(&q), &groups, q.pair_count(), budget).map_err(|e| e.to_string())? else {
            continue;
        };
        let lift = jones_lift(Arc::clone(&rel), bt.pairs(), None, &groups, budget).map_err(|e| e.to_string())?;
        let sigma = lift.sigma();
        let mut subset = GradingSubset::new(Arc::clone(&rel), sigma.clone()).unwrap();
        subset.certify(&groups, budget).map_err(|e| e.to_string())?;
        ensure(subset.certified(), || format!("σ = {subset} fails on {rel:?}: {:?}", subset.first_failure(&groups)))?;
        for g in &groups {
            let solver = ExtensionSolver::new(&rel, g).unwrap();
            let n = g.order().unwrap() as u64;
            let total = n.pow(sigma.len() as u32).min(400);
            for code in 0..total {
                let mut c = code;
                let phi: BTreeMap<Pair, Degree> = sigma
                    .iter()
                    .rev()
                    .map(|&p| {
                        let d = Degree((c % n) as i64);
                        c /= n;
                        (p, d)
                    })
                    .collect();
                let fixed: Vec<(usize, Degree)> = phi.iter().map(|(&(x, y), &d)| (rel.pair_id(x, y).unwrap(), d)).collect();
                let formula = lift.extend(g, &phi).map_err(|e| e.to_string())?;
                ensure(solver.solve(&fixed, 2) == vec![formula.values().to_vec()], || format!("{rel:?} over {g}: φ = {phi:?}"))?;
                compared += 1;
            }
        }
        lifted += 1;
    }
    ensure(lifted >= 20, || format!("only {lifted} preorders lifted"))?;
    Ok(format!("{lifted} preorders, {compared} formula extensions equal the enumerated one"))
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let theta = CompressionMap::from_named(Arc::new(fixtures::fig2b()), Arc::new(fixtures::fig2a()), &fixtures::FIG2_THETA)
        .map_err(|e| e.to_string())?;
    let h = GradedEmbedding::<ModInt>::new(theta.clone(), CoefficientRing::IntMod { n: 2 }).unwrap();
    let z3 = Arc::new(Semigroup::cyclic(3));
    let sigma1 = theta.target().resolve_pairs(&[("1", "2"), ("2", "3"), ("3", "4")]).unwrap();
    let solver = ExtensionSolver::new(theta.target(), &z3).unwrap();
    let phi_values: Vec<(usize, Degree)> = sigma1
        .iter()
        .map(|&(x, y)| (theta.target().pair_id(x, y).unwrap(), Degree(rng.gen_range(0..3))))
        .collect();
    let values = solver.solve(&phi_values, 1).pop().ok_or("σ₁ values do not extend")?;
    let phi1 = RelationHomomorphism::new(Arc::clone(theta.target()), Arc::clone(&z3), values).unwrap();
    let phi2 = induce_hom_through(&phi1, &theta).map_err(|e| e.to_string())?;
    let s = induce_grading(&phi1, h.domain()).map_err(|e| e.to_string())?;
    let t = induce_grading(&phi2, h.codomain()).map_err(|e| e.to_string())?;
    ensure(theta.interval_image_violation().is_none(), || "interval image differs".into())?;

    let random = |rng: &mut ChaCha8Rng| {
        let entries: Vec<(Pair, ModInt)> =
            theta.target().pairs().iter().map(|&p| (p, ModInt::new(rng.gen_range(0..2), 2))).collect();
        h.domain().element(entries).unwrap()
    };
    let mut nonzero = 0;
    for _ in 0..100 {
        let (f, g) = (random(rng), random(rng));
        let lhs = h.apply(&f.convolve(&g).unwrap()).unwrap();
        let rhs = h.apply(&f).unwrap().convolve(&h.apply(&g).unwrap()).unwrap();
        ensure(lhs == rhs, || format!("h(fg) ≠ h(f)h(g) for f = {}, g = {}", f.show(), g.show()))?;
        let sum = h.apply(&f.add(&g).unwrap()).unwrap();
        ensure(sum == h.apply(&f).unwrap().add(&h.apply(&g).unwrap()).unwrap(), || "h not additive".into())?;
        for x in [&f, &g] {
            if !x.is_zero() {
                nonzero += 1;
                ensure(!h.apply(x).unwrap().is_zero(), || format!("h({}) = 0", x.show()))?;
            }
            for (c, part) in s.decompose(x).unwrap() {
                ensure(t.in_component(&h.apply(&part).unwrap(), c), || format!("h(S_{c:?}) ⊄ T_{c:?}"))?;
            }
        }
    }
    Ok(format!("100 pairs over Z/2Z, {nonzero} nonzero inputs, no violations"))
}

fn criterion_8() -> Outcome {
    let first = infinite_support_report(12).map_err(|e| e.to_string())?;
    let again = infinite_support_report(12).map_err(|e| e.to_string())?;
    ensure(first == again, || "output differs between runs".into())?;
    ensure(first.strictly_increasing, || "|Im Φ| not strictly increasing".into())?;
    ensure(first.lower_bound_holds, || "|Im Φ| < k - 1 somewhere".into())?;
    let sizes: Vec<usize> = first.rows.iter().map(|r| r.1).collect();
    Ok(format!("|Im Φ| for k = 2..12: {sizes:?}"))
}

fn criterion_9() -> Outcome {
    use rayon::prelude::*;
    let mut checked = 0;
    let mut by_size = Vec::new();
    for n in 1..=5 {
        let bits = n * (n - 1);
        let relations: Vec<FiniteRelation> = (0..1u64 << bits)
            .into_par_iter()
            .map(|m| fixtures::reflexive_from_mask(n, m))
            .filter(|r| r.is_stable() && r.clasps().iter().all(|(_, k)| *k == ClaspKind::Unlocked))
            .collect();
        let failures: Vec<String> = relations
            .par_iter()
            .filter_map(|rel| match split_clasps(Arc::new(rel.clone()), Budget::default()) {
                Ok(c) if c.source().is_preorder() => None,
                Ok(_) => Some(format!("{rel:?}: Y is not a preorder")),
                Err(e) => Some(format!("{rel:?}: {e}")),
            })
            .collect();
        ensure(failures.is_empty(), || failures[0].clone())?;
        checked += relations.len();
        by_size.push(relations.len());
    }
    let fig2 = split_clasps(Arc::new(fixtures::fig2a()), Budget::default()).map_err(|e| e.to_string())?;
    let reference =
        CompressionMap::from_named(Arc::new(fixtures::fig2b()), Arc::new(fixtures::fig2a()), &fixtures::FIG2_THETA).unwrap();
    ensure(equivalent_compressions(&fig2, &reference), || "fig2a split is not equivalent to fig2b".into())?;
    Ok(format!("{checked} relations split and verified (by size {by_size:?}); fig2a split ≅ fig2b"))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let results: Vec<(u8, &str, Outcome)> = vec![
        (1, "balance agrees with unit associativity on 4 atoms", criterion_1()),
        (2, "unit product table", criterion_2()),
        (3, "good grading round trip", criterion_3(&mut rng)),
        (4, "Hasse arrows are grading sets", criterion_4(&mut rng)),
        (5, "two-step compression example", criterion_5()),
        (6, "lift of quotient grading sets", criterion_6(&mut rng)),
        (7, "graded embedding", criterion_7(&mut rng)),
        (8, "truncated naturals", criterion_8()),
        (9, "clasp splitting", criterion_9()),
    ];
    let mut failed = 0;
    for (k, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("acceptance {k} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("acceptance {k} FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
