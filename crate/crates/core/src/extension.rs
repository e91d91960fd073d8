//! Constraint propagation search for relation homomorphisms into a finite
//! semigroup.
//!
//! Variables are the pairs of ρ, domains are bitsets over the table, and each
//! transitive triple `(x, y, z)` contributes the constraint
//! `Φ(x,y)·Φ(y,z) = Φ(x,z)`. Domains are narrowed to generalized arc
//! consistency, then the search branches on the first undecided pair:
//! diagonal pairs first, then off-diagonal pairs in canonical order.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::relation::FiniteRelation;
use crate::semigroup::{CayleyTable, Degree, Semigroup};

type Domain = u64;

pub(crate) const MAX_TABLE_ORDER: usize = 64;

pub struct ExtensionSolver<'a> {
    table: &'a CayleyTable,
    full: Domain,
    constraints: Vec<[usize; 3]>,
    watchers: Vec<Vec<usize>>,
    order: Vec<usize>,
    vars: usize,
}

impl<'a> ExtensionSolver<'a> {
    pub fn new(relation: &FiniteRelation, target: &'a Semigroup) -> Result<Self> {
        let table = target
            .table()
            .ok_or_else(|| Error::input(format!("extension search needs a finite semigroup, got {target}")))?;
        if table.order() > MAX_TABLE_ORDER {
            return Err(Error::input(format!("semigroups above {MAX_TABLE_ORDER} elements are not supported")));
        }
        let vars = relation.pair_count();
        let id = |x, y| relation.pair_id(x, y).expect("triple pairs lie in the relation");
        let mut constraints: Vec<[usize; 3]> = relation
            .transitive_triples()
            .into_iter()
            .map(|[x, y, z]| [id(x, y), id(y, z), id(x, z)])
            .collect();
        constraints.sort_unstable();
        constraints.dedup();
        let mut watchers = vec![Vec::new(); vars];
        for (c, vs) in constraints.iter().enumerate() {
            for &v in vs {
                if watchers[v].last() != Some(&c) {
                    watchers[v].push(c);
                }
            }
        }
        let pairs = relation.pairs();
        let mut order: Vec<usize> = (0..vars).collect();
        order.sort_by_key(|&v| (pairs[v].0 != pairs[v].1, pairs[v]));
        let full = if table.order() == 64 { u64::MAX } else { (1u64 << table.order()) - 1 };
        Ok(ExtensionSolver { table, full, constraints, watchers, order, vars })
    }

    /// Up to `limit` homomorphisms agreeing with `fixed` (pair id, value),
    /// in the lexicographic order of the search. Values are indexed by pair
    /// id.
    pub fn solve(&self, fixed: &[(usize, Degree)], limit: usize) -> Vec<Vec<Degree>> {
        let mut domains = vec![self.full; self.vars];
        for &(v, d) in fixed {
            domains[v] &= 1 << d.0;
        }
        let mut out = Vec::new();
        if limit > 0 && self.propagate(&mut domains, (0..self.constraints.len()).collect()) {
            self.search(domains, limit, &mut out);
        }
        out
    }

    /// Number of extensions of `fixed`, capped at `limit`.
    pub fn count(&self, fixed: &[(usize, Degree)], limit: usize) -> usize {
        self.solve(fixed, limit).len()
    }

    fn search(&self, domains: Vec<Domain>, limit: usize, out: &mut Vec<Vec<Degree>>) {
        let Some(&var) = self.order.iter().find(|&&v| domains[v].count_ones() > 1) else {
            out.push(domains.iter().map(|d| Degree(d.trailing_zeros() as i64)).collect());
            return;
        };
        let mut rest = domains[var];
        while rest != 0 && out.len() < limit {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            let mut trial = domains.clone();
            trial[var] = bit;
            if self.propagate(&mut trial, self.watchers[var].iter().copied().collect()) {
                self.search(trial, limit, out);
            }
        }
    }

    fn propagate(&self, domains: &mut [Domain], mut queue: VecDeque<usize>) -> bool {
        let mut queued = vec![false; self.constraints.len()];
        for &c in &queue {
            queued[c] = true;
        }
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            let [p, q, r] = self.constraints[c];
            let (sp, sq, sr) = self.supported(domains, p, q, r);
            for (v, s) in [(p, sp), (q, sq), (r, sr)] {
                let narrowed = domains[v] & s;
                if narrowed == 0 {
                    return false;
                }
                if narrowed != domains[v] {
                    domains[v] = narrowed;
                    for &w in &self.watchers[v] {
                        if !queued[w] {
                            queued[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        true
    }

    /// Values of each variable that take part in some satisfying assignment
    /// of the single constraint `p·q = r`, honouring repeated variables.
    fn supported(&self, domains: &[Domain], p: usize, q: usize, r: usize) -> (Domain, Domain, Domain) {
        let (mut sp, mut sq, mut sr) = (0, 0, 0);
        for u in bits(domains[p]) {
            for v in bits(domains[q]) {
                if p == q && u != v {
                    continue;
                }
                let w = self.table.mul(u, v);
                if domains[r] >> w & 1 == 0 || (r == p && w != u) || (r == q && w != v) {
                    continue;
                }
                sp |= 1 << u;
                sq |= 1 << v;
                sr |= 1 << w;
            }
        }
        (sp, sq, sr)
    }
}

fn bits(mut d: Domain) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (d != 0).then(|| {
            let i = d.trailing_zeros() as usize;
            d &= d - 1;
            i
        })
    })
}
