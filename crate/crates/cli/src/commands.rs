use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use incidence_core::compression::{split_clasps, transport_grading_set, Direction};
use incidence_core::grading::{extract_homomorphism, induce_grading};
use incidence_core::grading_sets::{default_test_groups, hasse_extension, jones_lift, search_grading_set};
use incidence_core::incidence::unit_associativity_oracle;
use incidence_core::io::{
    load_group, load_relation, read_json, CompressionFile, ElementFile, HomFile, RelationFile, SubsetFile, VerdictReport,
};
use incidence_core::{
    demo, Atom, Budget, Coefficient, CoefficientRing, CompressionMap, Degree, Error, FiniteRelation, GoodGrading,
    GradedEmbedding, GradingSubset, IncidenceRing, ModInt, Pair, RelationHomomorphism, Result, Semigroup,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::args::*;
use crate::output::Report;

/// Calls a generic function with the scalar type matching a coefficient ring.
macro_rules! over_ring {
    ($ring:expr, $f:ident($($arg:expr),* $(,)?)) => {
        match $ring {
            CoefficientRing::Integers => $f::<BigInt>($($arg),*),
            CoefficientRing::IntMod { .. } => $f::<ModInt>($($arg),*),
            CoefficientRing::Rationals => $f::<BigRational>($($arg),*),
        }
    };
}

pub fn run(cli: &Cli) -> Result<Report> {
    let budget = Budget::new(cli.budget)?;
    match &cli.command {
        Command::Check(r) => check(&*relation(r)?),
        Command::Clasps(r) => clasps(&*relation(r)?),
        Command::Hasse(r) => hasse(&*relation(r)?),
        Command::Quotient { relation: r, representatives } => quotient(&*relation(r)?, representatives),
        Command::Crosscut { relation: r, max_len } => crosscut(&*relation(r)?, *max_len),
        Command::AssocOracle(r) => assoc_oracle(&*relation(r)?),
        Command::Ring(RingCommand::Mul(list)) => ring_op(list, true),
        Command::Ring(RingCommand::Add(list)) => ring_op(list, false),
        Command::Hom(HomCommand::Verify(h)) => hom_verify(h),
        Command::Hom(HomCommand::Extend(h)) => hom_extend(h),
        Command::Grade(GradeCommand::Induce { hom, ring }) => {
            let coeffs = parse_ring(ring)?;
            over_ring!(coeffs, grade_induce(hom, coeffs))
        }
        Command::Grade(GradeCommand::Decompose { hom, element }) => {
            let file: ElementFile = read_json(element)?;
            over_ring!(file.ring, grade_decompose(hom, &file))
        }
        Command::Grade(GradeCommand::Closure { hom, ring }) => {
            let coeffs = parse_ring(ring)?;
            over_ring!(coeffs, grade_closure(hom, coeffs))
        }
        Command::Grade(GradeCommand::Extract { hom, ring }) => {
            let coeffs = parse_ring(ring)?;
            over_ring!(coeffs, grade_extract(hom, coeffs))
        }
        Command::Gset(GsetCommand::Verify { relation: r, subset, groups: g }) => {
            gset_verify(relation(r)?, subset, &groups(g)?, budget)
        }
        Command::Gset(GsetCommand::Search { relation: r, groups: g, max_size }) => {
            gset_search(relation(r)?, &groups(g)?, *max_size, budget)
        }
        Command::Gset(GsetCommand::JonesLift { relation: r, subset, representatives, groups: g, hom }) => {
            gset_jones_lift(relation(r)?, subset, representatives, &groups(g)?, hom.as_deref(), budget)
        }
        Command::Compress(CompressCommand::Verify(m)) => compress_verify(&compression(m)?),
        Command::Compress(CompressCommand::Induce { map, group, hom }) => compress_induce(&compression(map)?, group, hom),
        Command::Compress(CompressCommand::Embed { map, element }) => {
            let file: ElementFile = read_json(element)?;
            over_ring!(file.ring, compress_embed(compression(map)?, &file))
        }
        Command::Compress(CompressCommand::Transport { map, subset, direction, groups: g }) => {
            compress_transport(&compression(map)?, subset, *direction, &groups(g)?, budget)
        }
        Command::Compress(CompressCommand::Split(r)) => compress_split(relation(r)?, budget),
        Command::Demo(DemoCommand::Fig2) => demo_fig2(budget),
        Command::Demo(DemoCommand::InfiniteSupport { k }) => {
            let (lines, ok) = demo::infinite_support(*k as usize)?;
            Ok(Report::new(ok, lines.clone(), json!({ "lines": lines })))
        }
        Command::Demo(DemoCommand::Sweep4) => {
            let (line, ok) = demo::sweep4();
            Ok(Report::new(ok, vec![line.clone()], json!({ "lines": [line] })))
        }
    }
}

fn relation(arg: &RelationArg) -> Result<Arc<FiniteRelation>> {
    load_relation(&arg.relation).map(Arc::new)
}

fn groups(list: &GroupList) -> Result<Vec<Arc<Semigroup>>> {
    if list.groups.is_empty() {
        return Ok(default_test_groups());
    }
    list.groups.iter().map(|s| load_group(s).map(Arc::new)).collect()
}

fn compression(args: &MapArgs) -> Result<CompressionMap> {
    let source = Arc::new(load_relation(&args.source)?);
    let target = Arc::new(load_relation(&args.target)?);
    read_json::<CompressionFile>(&args.map)?.build(source, target)
}

/// `Z`, `Q`, or `Z/n` (also `Z/nZ`).
fn parse_ring(s: &str) -> Result<CoefficientRing> {
    let ring = match s.trim() {
        "Z" => CoefficientRing::Integers,
        "Q" => CoefficientRing::Rationals,
        other => {
            let n = other
                .strip_prefix("Z/")
                .map(|m| m.strip_suffix('Z').unwrap_or(m))
                .and_then(|m| m.parse().ok())
                .ok_or_else(|| Error::Input(format!("unknown coefficient ring `{s}`; use Z, Q or Z/n")))?;
            CoefficientRing::IntMod { n }
        }
    };
    ring.validate()?;
    Ok(ring)
}

fn names(rel: &FiniteRelation, pairs: &[Pair]) -> Value {
    json!(rel.named_pairs(pairs))
}

fn atoms(rel: &FiniteRelation, items: &[usize]) -> Vec<Atom> {
    items.iter().map(|&i| rel.atom(i).clone()).collect()
}

fn hom_json(hom: &RelationHomomorphism) -> Value {
    json!(HomFile::from_hom(hom))
}

fn show_hom(hom: &RelationHomomorphism) -> String {
    let parts: Vec<String> = hom.named_values().into_iter().map(|(x, y, d)| format!("Φ({x},{y}) = {d}")).collect();
    parts.join(", ")
}

fn check(rel: &FiniteRelation) -> Result<Report> {
    let balanced = rel.check_balanced().err().map(|v| v.describe(rel));
    let stable = rel.check_stable().err().map(|v| v.describe(rel));
    let connected = rel.check_minimally_connected().err().map(|v| v.describe(rel));
    let rows: Vec<(&str, bool, Option<String>)> = vec![
        ("reflexive", rel.is_reflexive(), None),
        ("balanced", balanced.is_none(), balanced),
        ("stable", stable.is_none(), stable),
        ("preorder", rel.is_preorder(), None),
        ("partial_order", rel.is_partial_order(), None),
        ("minimally_connected", connected.is_none(), connected),
    ];
    let mut lines = Vec::new();
    let mut predicates = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for (name, holds, witness) in &rows {
        match witness {
            Some(w) => lines.push(format!("{name}: {holds} ({w})")),
            None => lines.push(format!("{name}: {holds}")),
        }
        predicates.insert(*name, *holds);
        if let Some(w) = witness {
            witnesses.insert(*name, w.clone());
        }
    }
    let holds = rows.iter().all(|(_, h, _)| *h);
    Ok(Report::new(holds, lines, json!({ "predicates": predicates, "witnesses": witnesses })))
}

fn clasps(rel: &FiniteRelation) -> Result<Report> {
    let found = rel.clasps();
    let mut lines = vec![format!("stable: {}", rel.is_stable())];
    if found.is_empty() {
        lines.push("no clasps".into());
    }
    lines.extend(found.iter().map(|(x, k)| format!("clasp {}: {k}", rel.atom(*x))));
    let list: Vec<Value> = found.iter().map(|(x, k)| json!({ "element": rel.atom(*x), "kind": k.to_string() })).collect();
    Ok(Report::success(lines, json!({ "stable": rel.is_stable(), "clasps": list })))
}

fn hasse(rel: &FiniteRelation) -> Result<Report> {
    let arrows = rel.hasse_arrows()?;
    Ok(Report::success(vec![format!("Hasse arrows: {}", rel.show_pairs(&arrows))], json!({ "arrows": names(rel, &arrows) })))
}

fn representatives(list: &[String]) -> Option<Vec<Atom>> {
    (!list.is_empty()).then(|| list.iter().map(|s| Atom::new(s.as_str())).collect())
}

fn quotient(rel: &FiniteRelation, reps: &[String]) -> Result<Report> {
    let reps = representatives(reps);
    let q = rel.paired_quotient(reps.as_deref())?;
    let classes: Vec<Vec<Atom>> = q.classes.iter().map(|c| atoms(rel, c)).collect();
    let shown: Vec<String> = q
        .classes
        .iter()
        .zip(&q.representatives)
        .map(|(c, &r)| format!("[{}] = {}", rel.atom(r), rel.show_set(c)))
        .collect();
    let order = &q.quotient;
    let lines = vec![
        format!("classes: {}", shown.join(", ")),
        format!("quotient order: {}", order.show_pairs(&order.off_diagonal().collect::<Vec<_>>())),
    ];
    let json = json!({
        "classes": classes,
        "representatives": atoms(rel, &q.representatives),
        "quotient": RelationFile::from_relation(order),
    });
    Ok(Report::success(lines, json))
}

fn crosscut(rel: &FiniteRelation, max_len: Option<usize>) -> Result<Report> {
    let shortest = rel.min_crosscut_length()?;
    let found = rel.crosscuts(max_len.unwrap_or(shortest))?;
    let mut lines = vec![format!("shortest crosscut length: {shortest}")];
    lines.extend(found.iter().map(|c| format!("crosscut {}", rel.show_set(c))));
    let list: Vec<Vec<Atom>> = found.iter().map(|c| atoms(rel, c)).collect();
    Ok(Report::success(lines, json!({ "min_length": shortest, "crosscuts": list })))
}

fn assoc_oracle(rel: &FiniteRelation) -> Result<Report> {
    let witness = unit_associativity_oracle(rel).err().map(|w| w.describe(rel));
    let mut lines = vec![
        format!("unit-associative: {}", witness.is_none()),
        format!("balanced: {}", rel.is_balanced()),
    ];
    if let Some(w) = &witness {
        lines.push(w.clone());
    }
    let json = json!({ "unit_associative": witness.is_none(), "balanced": rel.is_balanced(), "witness": witness });
    Ok(Report::new(witness.is_none(), lines, json))
}

fn ring_op(list: &ElementList, mul: bool) -> Result<Report> {
    if list.elements.len() < 2 {
        return Err(Error::Input("give at least two --element files".into()));
    }
    let rel = relation(&list.relation)?;
    let files = list.elements.iter().map(|p| read_json::<ElementFile>(p)).collect::<Result<Vec<_>>>()?;
    over_ring!(files[0].ring, fold_elements(rel, &files, mul))
}

fn fold_elements<R: Coefficient>(rel: Arc<FiniteRelation>, files: &[ElementFile], mul: bool) -> Result<Report> {
    let ring = IncidenceRing::<R>::new(rel, files[0].ring)?;
    let mut elements = files.iter().map(|f| f.build(&ring));
    let first = elements.next().expect("two elements")?;
    let result = elements.try_fold(first, |acc, f| if mul { acc.convolve(&f?) } else { acc.add(&f?) })?;
    Ok(Report::success(vec![result.show()], json!(ElementFile::from_element(&result))))
}

fn hom_parts(args: &HomArgs) -> Result<(Arc<FiniteRelation>, Arc<Semigroup>, HomFile)> {
    Ok((relation(&args.relation)?, Arc::new(load_group(&args.group)?), read_json(&args.hom)?))
}

fn hom_verify(args: &HomArgs) -> Result<Report> {
    let (rel, g, file) = hom_parts(args)?;
    let hom = file.build(rel, Arc::clone(&g))?;
    let diagonal = hom.diagonal_constraint();
    let image: Vec<String> = hom.image().into_iter().map(|d| g.name(d)).collect();
    let lines = vec![
        format!("homomorphism into {g}: true"),
        format!("image: {{{}}}", image.join(", ")),
        format!(
            "diagonal: idempotent {}, identity {}, identity forced {}",
            diagonal.all_idempotent, diagonal.all_identity, diagonal.identity_forced
        ),
    ];
    let json = json!({
        "homomorphism": true,
        "image": image,
        "diagonal": {
            "all_idempotent": diagonal.all_idempotent,
            "all_identity": diagonal.all_identity,
            "identity_forced": diagonal.identity_forced,
        },
    });
    Ok(Report::new(diagonal.holds(), lines, json))
}

fn hom_extend(args: &HomArgs) -> Result<Report> {
    let (rel, g, file) = hom_parts(args)?;
    let phi: BTreeMap<Pair, Degree> = file.partial(&rel, &g)?.into_iter().collect();
    let hom = hasse_extension(rel, g, &phi)?;
    Ok(Report::success(vec![show_hom(&hom)], hom_json(&hom)))
}

fn unit_degrees<R: Coefficient>(args: &HomArgs, coeffs: CoefficientRing) -> Result<GoodGrading<R>> {
    let (rel, g, file) = hom_parts(args)?;
    let given = file.partial(&rel, &g)?;
    if given.len() != rel.pair_count() {
        return Err(Error::Input(format!("a degree is needed for each of the {} pairs", rel.pair_count())));
    }
    let ring = IncidenceRing::<R>::new(rel, coeffs)?;
    GoodGrading::from_unit_degrees(ring, g, given.into_iter().map(|(_, d)| d).collect())
}

fn grading_json<R: Coefficient>(grading: &GoodGrading<R>) -> (Vec<String>, Value) {
    let rel = grading.ring().relation();
    let g = grading.target();
    let units: Vec<(Atom, Atom, String)> = rel
        .pairs()
        .iter()
        .map(|&p| (rel.atom(p.0).clone(), rel.atom(p.1).clone(), g.name(grading.unit_degree(p))))
        .collect();
    let support: Vec<String> = grading.support().into_iter().map(|d| g.name(d)).collect();
    let mut lines = vec![format!("Supp S = {{{}}}", support.join(", "))];
    lines.extend(units.iter().map(|(x, y, d)| format!("∂e[{x},{y}] = {d}")));
    (lines, json!({ "units": units, "support": support }))
}

fn grade_induce<R: Coefficient>(args: &HomArgs, coeffs: CoefficientRing) -> Result<Report> {
    let (rel, g, file) = hom_parts(args)?;
    let hom = file.build(Arc::clone(&rel), g)?;
    let ring = IncidenceRing::<R>::new(rel, coeffs)?;
    let grading = induce_grading(&hom, &ring)?;
    let closure = grading.verify_component_closure().err().map(|w| grading.describe_witness(&w));
    let (mut lines, mut json) = grading_json(&grading);
    lines.push(format!("component closure: {}", closure.is_none()));
    json["closure_witness"] = json!(closure);
    Ok(Report::new(closure.is_none(), lines, json))
}

fn grade_decompose<R: Coefficient>(args: &HomArgs, file: &ElementFile) -> Result<Report> {
    let (rel, g, hom_file) = hom_parts(args)?;
    let hom = hom_file.build(Arc::clone(&rel), Arc::clone(&g))?;
    let ring = IncidenceRing::<R>::new(rel, file.ring)?;
    let f = file.build(&ring)?;
    let grading = induce_grading(&hom, &ring)?;
    let parts = grading.decompose(&f)?;
    let lines = parts.iter().map(|(d, part)| format!("degree {}: {}", g.name(*d), part.show())).collect();
    let json: Vec<Value> = parts
        .iter()
        .map(|(d, part)| json!({ "degree": g.name(*d), "element": ElementFile::from_element(part) }))
        .collect();
    Ok(Report::success(lines, json!({ "components": json })))
}

fn grade_closure<R: Coefficient>(args: &HomArgs, coeffs: CoefficientRing) -> Result<Report> {
    let grading = unit_degrees::<R>(args, coeffs)?;
    let witness = grading.verify_component_closure().err().map(|w| grading.describe_witness(&w));
    let mut lines = vec![format!("component closure: {}", witness.is_none())];
    lines.extend(witness.clone());
    Ok(Report::new(witness.is_none(), lines, json!({ "closed": witness.is_none(), "witness": witness })))
}

fn grade_extract<R: Coefficient>(args: &HomArgs, coeffs: CoefficientRing) -> Result<Report> {
    let grading = unit_degrees::<R>(args, coeffs)?;
    let hom = extract_homomorphism(&grading)?;
    Ok(Report::success(vec![show_hom(&hom)], hom_json(&hom)))
}

fn verdict_report(subset: &GradingSubset, groups: &[Arc<Semigroup>], mut lines: Vec<String>) -> Report {
    let report = VerdictReport::new(subset, groups);
    for v in subset.verdicts() {
        lines.push(format!("{}: extendible {}, essential {}", v.group, v.extendible, v.essential));
    }
    if let Some(w) = &report.witness {
        lines.push(format!("witness ({}): {}", w.group, w.message));
    }
    lines.push(format!("grading set for every listed group: {}", subset.certified()));
    Report::new(subset.certified(), lines, json!(report))
}

fn gset_verify(rel: Arc<FiniteRelation>, path: &Path, groups: &[Arc<Semigroup>], budget: Budget) -> Result<Report> {
    let pairs = read_json::<SubsetFile>(path)?.resolve(&rel)?;
    let mut subset = GradingSubset::new(rel, pairs)?;
    subset.certify(groups, budget)?;
    Ok(verdict_report(&subset, groups, vec![format!("σ = {subset}")]))
}

fn gset_search(rel: Arc<FiniteRelation>, groups: &[Arc<Semigroup>], max_size: Option<usize>, budget: Budget) -> Result<Report> {
    let max = max_size.unwrap_or(rel.pair_count());
    let found = search_grading_set(Arc::clone(&rel), groups, max, budget)?
        .ok_or_else(|| Error::NotFound(format!("no grading set with at most {max} pairs")))?;
    Ok(verdict_report(&found, groups, vec![format!("σ = {found}")]))
}

fn gset_jones_lift(
    rel: Arc<FiniteRelation>,
    path: &Path,
    reps: &[String],
    groups: &[Arc<Semigroup>],
    hom: Option<&Path>,
    budget: Budget,
) -> Result<Report> {
    let reps = representatives(reps);
    let quotient = rel.paired_quotient(reps.as_deref())?;
    let beta_tilde = read_json::<SubsetFile>(path)?.resolve(&quotient.quotient)?;
    let lift = jones_lift(Arc::clone(&rel), &beta_tilde, reps.as_deref(), groups, budget)?;
    let sigma = lift.sigma();
    let mut lines = vec![
        format!("β̃ = {}", quotient.quotient.show_pairs(&beta_tilde)),
        format!("β = {}", rel.show_pairs(lift.beta())),
        format!("γ = {}", rel.show_pairs(lift.gamma())),
        format!("σ = β ∪ γ = {}", rel.show_pairs(&sigma)),
    ];
    let mut json = json!({
        "beta": names(&rel, lift.beta()),
        "gamma": names(&rel, lift.gamma()),
        "sigma": names(&rel, &sigma),
    });
    if let Some(path) = hom {
        let [g] = groups else {
            return Err(Error::Input("extending φ needs exactly one --group".into()));
        };
        let phi: BTreeMap<Pair, Degree> = read_json::<HomFile>(path)?.partial(&rel, g)?.into_iter().collect();
        let extended = lift.extend(g, &phi)?;
        lines.push(format!("extension: {}", show_hom(&extended)));
        json["extension"] = hom_json(&extended);
    }
    Ok(Report::success(lines, json))
}

fn star_lines(theta: &CompressionMap) -> (Vec<String>, Value) {
    let (source, target) = (theta.source(), theta.target());
    let mut lines = Vec::new();
    let mut star = Vec::new();
    for p in source.off_diagonal() {
        if let Some(q) = theta.star(p) {
            lines.push(format!("θ*{} = {}", source.show_pair(p), target.show_pair(q)));
            star.push(json!([names(source, &[p])[0], names(target, &[q])[0]]));
        }
    }
    (lines, json!(star))
}

fn compress_verify(theta: &CompressionMap) -> Result<Report> {
    let (star, star_json) = star_lines(theta);
    let mut lines = vec!["compression: true (conditions 1, 2 and 3 hold)".to_string()];
    lines.extend(star);
    Ok(Report::success(lines, json!({ "compression": true, "star": star_json })))
}

fn compress_induce(theta: &CompressionMap, group: &str, path: &Path) -> Result<Report> {
    let g = Arc::new(load_group(group)?);
    let phi = read_json::<HomFile>(path)?.build(Arc::clone(theta.target()), g)?;
    let pulled = incidence_core::compression::induce_hom_through(&phi, theta)?;
    Ok(Report::success(vec![show_hom(&pulled)], hom_json(&pulled)))
}

fn compress_embed<R: Coefficient>(theta: CompressionMap, file: &ElementFile) -> Result<Report> {
    let h = GradedEmbedding::<R>::new(theta, file.ring)?;
    let f = file.build(h.domain())?;
    let image = h.apply(&f)?;
    Ok(Report::success(vec![format!("h({}) = {}", f.show(), image.show())], json!(ElementFile::from_element(&image))))
}

fn compress_transport(
    theta: &CompressionMap,
    path: &Path,
    direction: DirectionArg,
    groups: &[Arc<Semigroup>],
    budget: Budget,
) -> Result<Report> {
    let (from, direction) = match direction {
        DirectionArg::Forward => (theta.source(), Direction::Forward),
        DirectionArg::Reverse => (theta.target(), Direction::Reverse),
    };
    let pairs = read_json::<SubsetFile>(path)?.resolve(from)?;
    let moved = transport_grading_set(&pairs, theta, direction, groups, budget)?;
    let lines = vec![format!("{} ↦ {moved}", from.show_pairs(&pairs))];
    Ok(verdict_report(&moved, groups, lines))
}

fn compress_split(rel: Arc<FiniteRelation>, budget: Budget) -> Result<Report> {
    let theta = split_clasps(rel, budget)?;
    let source = theta.source();
    let shown: Vec<String> = theta.named().iter().map(|(a, b)| format!("θ({a})={b}")).collect();
    let lines = vec![
        format!("Y = {}", source.show_set(&(0..source.len()).collect::<Vec<_>>())),
        format!("ρ_Y = {}", source.show_pairs(&source.off_diagonal().collect::<Vec<_>>())),
        format!("θ: {}", shown.join(", ")),
    ];
    let json = json!({ "relation": RelationFile::from_relation(source), "map": CompressionFile::from_map(&theta) });
    Ok(Report::success(lines, json))
}

fn demo_fig2(budget: Budget) -> Result<Report> {
    let r = demo::fig2(budget)?;
    let verdicts: BTreeMap<&str, bool> = r.sigma1_verdicts.iter().map(|(g, ok)| (g.as_str(), *ok)).collect();
    let json = json!({
        "lines": r.lines,
        "quotient_grading_set": r.quotient_grading_set,
        "sigma2": r.sigma2,
        "sigma1": r.sigma1,
        "sigma1_verdicts": verdicts,
        "split_matches": r.split_matches,
    });
    Ok(Report::new(r.all_hold(), r.lines, json))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_names() {
        assert_eq!(parse_ring("Z").unwrap(), CoefficientRing::Integers);
        assert_eq!(parse_ring("Q").unwrap(), CoefficientRing::Rationals);
        assert_eq!(parse_ring("Z/6").unwrap(), CoefficientRing::IntMod { n: 6 });
        assert_eq!(parse_ring("Z/6Z").unwrap(), CoefficientRing::IntMod { n: 6 });
        assert!(parse_ring("Z/1").is_err());
        assert!(parse_ring("R").is_err());
    }
}
