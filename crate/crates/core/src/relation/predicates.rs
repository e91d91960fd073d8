use std::fmt;

use super::{FiniteRelation, Pair};

/// Why a relation fails to be balanced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BalanceViolation {
    /// The loop at this element is missing.
    NotReflexive(usize),
    /// `w ρ x, x ρ y, y ρ z, w ρ z` all hold but exactly one of `w ρ y`,
    /// `x ρ z` does.
    Quadruple([usize; 4]),
}

impl BalanceViolation {
    pub fn describe(&self, rel: &FiniteRelation) -> String {
        match *self {
            BalanceViolation::NotReflexive(x) => format!("not reflexive at {}", rel.atom(x)),
            BalanceViolation::Quadruple([w, x, y, z]) => {
                let a = |i: usize| rel.atom(i);
                format!(
                    "balance fails at (w,x,y,z) = ({},{},{},{}): {}ρ{} is {} but {}ρ{} is {}",
                    a(w),
                    a(x),
                    a(y),
                    a(z),
                    a(w),
                    a(y),
                    rel.relates(w, y),
                    a(x),
                    a(z),
                    rel.relates(x, z)
                )
            }
        }
    }
}

/// Why a relation fails to be stable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityViolation {
    NotBalanced(BalanceViolation),
    /// Distinct `a, b, c, d` with `aρb, aρc, bρc, bρd, cρd` but not `aρd`.
    Implication([usize; 4]),
}

impl StabilityViolation {
    pub fn describe(&self, rel: &FiniteRelation) -> String {
        match self {
            StabilityViolation::NotBalanced(b) => b.describe(rel),
            StabilityViolation::Implication([a, b, c, d]) => format!(
                "stability fails at (a,b,c,d) = ({},{},{},{}): {}ρ{} does not hold",
                rel.atom(*a),
                rel.atom(*b),
                rel.atom(*c),
                rel.atom(*d),
                rel.atom(*a),
                rel.atom(*d)
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaspKind {
    Locked,
    Unlocked,
}

impl fmt::Display for ClaspKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaspKind::Locked => "locked",
            ClaspKind::Unlocked => "unlocked",
        })
    }
}

/// Why a relation is not a minimally connected partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimalConnectivityViolation {
    NotPartialOrder,
    Disconnected,
    /// The nonempty interval `[x, y]` contains two incomparable elements.
    IntervalNotChain(Pair),
}

impl MinimalConnectivityViolation {
    pub fn describe(&self, rel: &FiniteRelation) -> String {
        match *self {
            MinimalConnectivityViolation::NotPartialOrder => "not a partial order".into(),
            MinimalConnectivityViolation::Disconnected => "not connected".into(),
            MinimalConnectivityViolation::IntervalNotChain((x, y)) => {
                format!("interval [{},{}] is not a chain", rel.atom(x), rel.atom(y))
            }
        }
    }
}

impl FiniteRelation {
    pub fn is_reflexive(&self) -> bool {
        self.first_missing_loop().is_none()
    }

    fn first_missing_loop(&self) -> Option<usize> {
        (0..self.len()).find(|&x| !self.relates(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).all(|y| !self.relates(x, y) || (0..n).all(|z| !self.relates(y, z) || self.relates(x, z)))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.off_diagonal().all(|(x, y)| !self.relates(y, x))
    }

    /// Checks reflexivity and the balance property over all quadruples,
    /// returning the lexicographically least violation.
    pub fn check_balanced(&self) -> Result<(), BalanceViolation> {
        if let Some(x) = self.first_missing_loop() {
            return Err(BalanceViolation::NotReflexive(x));
        }
        let n = self.len();
        for w in 0..n {
            for x in 0..n {
                if !self.relates(w, x) {
                    continue;
                }
                for y in 0..n {
                    if !self.relates(x, y) {
                        continue;
                    }
                    for z in 0..n {
                        if self.relates(y, z) && self.relates(w, z) && self.relates(w, y) != self.relates(x, z) {
                            return Err(BalanceViolation::Quadruple([w, x, y, z]));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_balanced(&self) -> bool {
        self.check_balanced().is_ok()
    }

    pub fn check_stable(&self) -> Result<(), StabilityViolation> {
        self.check_balanced().map_err(StabilityViolation::NotBalanced)?;
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if b == a || !self.relates(a, b) {
                    continue;
                }
                for c in 0..n {
                    if c == a || c == b || !self.relates(a, c) || !self.relates(b, c) {
                        continue;
                    }
                    for d in 0..n {
                        if d == a || d == b || d == c {
                            continue;
                        }
                        if self.relates(b, d) && self.relates(c, d) && !self.relates(a, d) {
                            return Err(StabilityViolation::Implication([a, b, c, d]));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_stable(&self) -> bool {
        self.check_stable().is_ok()
    }

    /// `x` is a clasp when some `w, y ≠ x` have `wρx`, `xρy` and `(w,y) ∉ ρ`.
    pub fn is_clasp(&self, x: usize) -> bool {
        let n = self.len();
        (0..n).any(|w| {
            w != x && self.relates(w, x) && (0..n).any(|y| y != x && self.relates(x, y) && !self.relates(w, y))
        })
    }

    /// `x` is locked when some `u, v, w, y ≠ x` have `(w,y) ∉ ρ` and
    /// `(u,x,y), (u,x,v), (w,x,v)` all transitive triples.
    pub fn is_locked_clasp(&self, x: usize) -> bool {
        let n = self.len();
        let others = || (0..n).filter(move |&i| i != x);
        let trans = |a, b, c| self.is_transitive_triple([a, b, c]);
        others().any(|w| {
            others().any(|y| {
                !self.relates(w, y)
                    && others().any(|u| {
                        trans(u, x, y) && others().any(|v| trans(u, x, v) && trans(w, x, v))
                    })
            })
        })
    }

    /// Every clasp with its kind, in canonical element order.
    pub fn clasps(&self) -> Vec<(usize, ClaspKind)> {
        (0..self.len())
            .filter(|&x| self.is_clasp(x))
            .map(|x| {
                let kind = if self.is_locked_clasp(x) { ClaspKind::Locked } else { ClaspKind::Unlocked };
                (x, kind)
            })
            .collect()
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_preorder() && self.is_antisymmetric()
    }

    /// Connectedness of the underlying undirected graph. The empty relation
    /// counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if !seen[y] && (self.relates(x, y) || self.relates(y, x)) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A connected partial order whose nonempty intervals are all chains.
    pub fn check_minimally_connected(&self) -> Result<(), MinimalConnectivityViolation> {
        if !self.is_partial_order() {
            return Err(MinimalConnectivityViolation::NotPartialOrder);
        }
        if let Some(&p) = self.pairs().iter().find(|&&(x, y)| !self.is_chain(&self.interval(x, y))) {
            return Err(MinimalConnectivityViolation::IntervalNotChain(p));
        }
        if !self.is_connected() {
            return Err(MinimalConnectivityViolation::Disconnected);
        }
        Ok(())
    }

    pub fn is_minimally_connected(&self) -> bool {
        self.check_minimally_connected().is_ok()
    }

    pub fn is_chain(&self, items: &[usize]) -> bool {
        items
            .iter()
            .enumerate()
            .all(|(k, &a)| items[k + 1..].iter().all(|&b| self.relates(a, b) || self.relates(b, a)))
    }

    pub fn is_antichain(&self, items: &[usize]) -> bool {
        items
            .iter()
            .enumerate()
            .all(|(k, &a)| items[k + 1..].iter().all(|&b| !self.relates(a, b) && !self.relates(b, a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn named_quad(rel: &FiniteRelation, q: [usize; 4]) -> [String; 4] {
        q.map(|i| rel.atom(i).to_string())
    }

    #[test]
    fn reflexivity() {
        assert!(FiniteRelation::on_range(0, |_, _| false).is_reflexive());
        assert!(!FiniteRelation::new(["1", "2"], [("1", "1")]).unwrap().is_reflexive());
        assert!(fixtures::chain3().is_reflexive());
    }

    #[test]
    fn balance_examples() {
        let bad = fixtures::unbalanced4();
        match bad.check_balanced() {
            Err(BalanceViolation::Quadruple(q)) => assert_eq!(named_quad(&bad, q), ["1", "2", "3", "4"]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(fixtures::square4().is_balanced());
        assert!(fixtures::chain3().is_balanced());
        assert!(matches!(
            FiniteRelation::new(["1", "2"], [("1", "2")]).unwrap().check_balanced(),
            Err(BalanceViolation::NotReflexive(0))
        ));
    }

    #[test]
    fn fig2a_is_stable_with_one_unlocked_clasp() {
        let r = fixtures::fig2a();
        assert!(r.is_stable());
        assert!(!r.is_transitive());
        assert_eq!(r.clasps(), vec![(r.index_of("2").unwrap(), ClaspKind::Unlocked)]);
    }

    #[test]
    fn square4_clasps() {
        let r = fixtures::square4();
        assert_eq!(r.clasps(), vec![(1, ClaspKind::Unlocked), (2, ClaspKind::Unlocked)]);
    }

    #[test]
    fn balanced_but_not_stable_exists_on_four_atoms() {
        let r = fixtures::balanced_unstable4();
        assert!(r.is_balanced());
        assert!(matches!(r.check_stable(), Err(StabilityViolation::Implication(_))));
    }

    #[test]
    fn order_predicates() {
        let c = fixtures::chain3();
        assert!(c.is_preorder() && c.is_partial_order() && c.is_connected() && c.is_minimally_connected());

        let d = fixtures::diamond();
        assert!(d.is_partial_order());
        assert_eq!(
            d.check_minimally_connected(),
            Err(MinimalConnectivityViolation::IntervalNotChain((0, 3)))
        );

        let b = fixtures::fig2b();
        assert!(b.is_preorder());
        assert!(!b.is_partial_order());
    }

    #[test]
    fn fig2c_is_not_connected() {
        let c = fixtures::fig2c();
        assert!(c.is_partial_order());
        assert_eq!(c.check_minimally_connected(), Err(MinimalConnectivityViolation::Disconnected));
    }

    #[test]
    fn locked_clasp_detected() {
        // u=1 → x=3 → y=4, 1 → v=5, w=2 → 3 → 5, 2 ↛ 4
        let r = FiniteRelation::new(
            ["1", "2", "3", "4", "5"],
            [("1", "3"), ("3", "4"), ("1", "4"), ("1", "5"), ("3", "5"), ("2", "3"), ("2", "5")],
        )
        .unwrap()
        .reflexive_closure();
        assert!(r.is_clasp(2));
        assert!(r.is_locked_clasp(2));
        assert_eq!(r.clasps(), vec![(2, ClaspKind::Locked)]);
    }
}
