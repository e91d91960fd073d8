use super::{Atom, FiniteRelation, Pair};
use crate::error::{Error, Result};
use crate::util::Combinations;

/// A preorder with its paired elements identified.
///
/// Classes are `[x] = {y : xρy and yρx}`. Each class is named by its
/// representative, so the quotient's atoms are a subset of the input atoms.
#[derive(Clone, Debug)]
pub struct PairedQuotient {
    /// The partial order ρ̃ on classes.
    pub quotient: FiniteRelation,
    /// Index in `quotient` of the class of each input element.
    pub class_of: Vec<usize>,
    /// Input index of the representative of each class.
    pub representatives: Vec<usize>,
    /// Members of each class, ascending.
    pub classes: Vec<Vec<usize>>,
}

impl PairedQuotient {
    /// Lifts a pair of classes to the pair of their representatives.
    pub fn lift(&self, (a, b): Pair) -> Pair {
        (self.representatives[a], self.representatives[b])
    }

    /// Projects a pair of input elements to the pair of their classes.
    pub fn project(&self, (x, y): Pair) -> Pair {
        (self.class_of[x], self.class_of[y])
    }

    pub fn is_representative(&self, x: usize) -> bool {
        self.representatives[self.class_of[x]] == x
    }
}

/// A crosscut, given by one representative per member class.
pub type Crosscut = Vec<usize>;

impl FiniteRelation {
    fn require_preorder(&self, what: &str) -> Result<()> {
        if self.is_preorder() {
            Ok(())
        } else {
            Err(Error::input(format!("{what} requires a preorder")))
        }
    }

    /// Covering pairs `a < b` with nothing strictly between.
    pub fn hasse_arrows(&self) -> Result<Vec<Pair>> {
        if !self.is_partial_order() {
            return Err(Error::input("Hasse arrows require a partial order"));
        }
        Ok(self.covers())
    }

    fn covers(&self) -> Vec<Pair> {
        self.off_diagonal()
            .filter(|&(a, b)| (0..self.len()).all(|c| c == a || c == b || !(self.relates(a, c) && self.relates(c, b))))
            .collect()
    }

    /// Identifies paired elements of a preorder.
    ///
    /// `representatives`, when given, must name exactly one member of every
    /// class; otherwise the least member of each class is used.
    pub fn paired_quotient(&self, representatives: Option<&[Atom]>) -> Result<PairedQuotient> {
        self.require_preorder("the paired quotient")?;
        let n = self.len();
        let mut class_root = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_root[x] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (x..n).filter(|&y| self.relates(x, y) && self.relates(y, x)).collect();
            for &m in &members {
                class_root[m] = classes.len();
            }
            classes.push(members);
        }

        let mut reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        if let Some(chosen) = representatives {
            let mut seen = vec![false; classes.len()];
            for atom in chosen {
                let x = self.index_of(atom.as_str())?;
                let c = class_root[x];
                if seen[c] {
                    return Err(Error::input(format!("two representatives chosen for the class of {atom}")));
                }
                seen[c] = true;
                reps[c] = x;
            }
            if let Some(c) = seen.iter().position(|s| !s) {
                return Err(Error::input(format!("no representative chosen for the class of {}", self.atom(classes[c][0]))));
            }
        }

        // Quotient atoms are representative names, which must be re-sorted.
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by(|&a, &b| self.atom(reps[a]).cmp(self.atom(reps[b])));
        let mut position = vec![0; classes.len()];
        for (k, &c) in order.iter().enumerate() {
            position[c] = k;
        }
        let atoms: Vec<Atom> = order.iter().map(|&c| self.atom(reps[c]).clone()).collect();
        let representatives: Vec<usize> = order.iter().map(|&c| reps[c]).collect();
        let quotient = FiniteRelation::from_fn(atoms, |a, b| self.relates(representatives[a], representatives[b]));
        let class_of = class_root.iter().map(|&c| position[c]).collect();
        let classes = order.iter().map(|&c| classes[c].clone()).collect();
        Ok(PairedQuotient { quotient, class_of, representatives, classes })
    }

    /// All maximal chains of a partial order, each listed bottom to top.
    pub fn maximal_chains(&self) -> Result<Vec<Vec<usize>>> {
        let arrows = self.hasse_arrows()?;
        let n = self.len();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut has_lower = vec![false; n];
        for &(a, b) in &arrows {
            up[a].push(b);
            has_lower[b] = true;
        }
        let mut chains = Vec::new();
        let mut path = Vec::new();
        fn walk(x: usize, up: &[Vec<usize>], path: &mut Vec<usize>, chains: &mut Vec<Vec<usize>>) {
            path.push(x);
            if up[x].is_empty() {
                chains.push(path.clone());
            }
            for &y in &up[x] {
                walk(y, up, path, chains);
            }
            path.pop();
        }
        for x in (0..n).filter(|&x| !has_lower[x]) {
            walk(x, &up, &mut path, &mut chains);
        }
        Ok(chains)
    }

    /// Crosscuts of a preorder with at most `max_len` members, computed in
    /// the paired quotient, ordered by length and then lexicographically.
    pub fn crosscuts(&self, max_len: usize) -> Result<Vec<Crosscut>> {
        self.require_preorder("crosscuts")?;
        let q = self.paired_quotient(None)?;
        let order = &q.quotient;
        let chains = order.maximal_chains()?;
        let mut out = Vec::new();
        for k in 1..=max_len.min(order.len()) {
            for members in Combinations::new(order.len(), k) {
                if is_crosscut(order, &chains, &members) {
                    out.push(members.iter().map(|&c| q.representatives[c]).collect());
                }
            }
        }
        Ok(out)
    }

    /// Length of the shortest crosscut; 0 for the empty set.
    pub fn min_crosscut_length(&self) -> Result<usize> {
        self.require_preorder("crosscuts")?;
        let q = self.paired_quotient(None)?;
        let order = &q.quotient;
        let chains = order.maximal_chains()?;
        for k in 1..=order.len() {
            if Combinations::new(order.len(), k).any(|m| is_crosscut(order, &chains, &m)) {
                return Ok(k);
            }
        }
        Ok(0)
    }

    /// Whether `members` (input indices) form a crosscut of this preorder.
    pub fn is_crosscut(&self, members: &[usize]) -> Result<bool> {
        self.require_preorder("crosscuts")?;
        let q = self.paired_quotient(None)?;
        let mut classes: Vec<usize> = members.iter().map(|&x| q.class_of[x]).collect();
        classes.sort_unstable();
        if classes.windows(2).any(|w| w[0] == w[1]) {
            // two paired members are comparable
            return Ok(false);
        }
        let chains = q.quotient.maximal_chains()?;
        Ok(is_crosscut(&q.quotient, &chains, &classes))
    }
}

fn is_crosscut(order: &FiniteRelation, maximal_chains: &[Vec<usize>], members: &[usize]) -> bool {
    order.is_antichain(members)
        && (0..order.len()).all(|x| members.iter().any(|&a| order.relates(x, a) || order.relates(a, x)))
        && maximal_chains.iter().all(|c| c.iter().any(|x| members.contains(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(rel: &FiniteRelation, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| rel.atom(x).to_string()).collect()
    }

    #[test]
    fn hasse_of_chain3_and_fig2c() {
        let c = fixtures::chain3();
        assert_eq!(c.hasse_arrows().unwrap(), vec![(0, 1), (1, 2)]);
        let q = fixtures::fig2c();
        assert_eq!(q.show_pairs(&q.hasse_arrows().unwrap()), "{(1,2),(3,4)}");
        assert!(FiniteRelation::on_range(3, |i, j| i == j).hasse_arrows().unwrap().is_empty());
        assert!(fixtures::fig2b().hasse_arrows().is_err());
    }

    #[test]
    fn chain_has_n_minus_one_arrows() {
        for n in 1..8 {
            assert_eq!(fixtures::chain(n).hasse_arrows().unwrap().len(), n - 1);
        }
    }

    #[test]
    fn fig2b_quotient_is_fig2c() {
        let b = fixtures::fig2b();
        let q = b.paired_quotient(None).unwrap();
        assert_eq!(q.quotient, fixtures::fig2c());
        assert_eq!(names(&b, &q.representatives), ["1", "2", "3", "4"]);
        let classes: Vec<Vec<String>> = q.classes.iter().map(|c| names(&b, c)).collect();
        assert_eq!(classes, vec![vec!["1"], vec!["2"], vec!["3"], vec!["4", "5"]]);
    }

    #[test]
    fn quotient_with_chosen_representatives() {
        let b = fixtures::fig2b();
        let reps: Vec<Atom> = ["1", "2", "3", "5"].into_iter().map(Atom::from).collect();
        let q = b.paired_quotient(Some(&reps)).unwrap();
        assert_eq!(q.quotient.show_pairs(&q.quotient.hasse_arrows().unwrap()), "{(1,2),(3,5)}");
        let dup: Vec<Atom> = ["1", "2", "3", "4", "5"].into_iter().map(Atom::from).collect();
        assert!(b.paired_quotient(Some(&dup)).is_err());
        assert!(b.paired_quotient(Some(&dup[..3])).is_err());
    }

    #[test]
    fn partial_order_quotient_is_identity() {
        let d = fixtures::diamond();
        let q = d.paired_quotient(None).unwrap();
        assert_eq!(q.quotient, d);
        assert_eq!(q.class_of, vec![0, 1, 2, 3]);
    }

    #[test]
    fn mutual_pair_collapses() {
        let r = FiniteRelation::new(["a", "b"], [("a", "b"), ("b", "a")]).unwrap().reflexive_closure();
        let q = r.paired_quotient(None).unwrap();
        assert_eq!(q.quotient.len(), 1);
        assert!(fixtures::fig2a().paired_quotient(None).is_err());
    }

    #[test]
    fn crosscuts_of_chain3() {
        let c = fixtures::chain3();
        assert_eq!(c.crosscuts(3).unwrap(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(c.min_crosscut_length().unwrap(), 1);
    }

    #[test]
    fn crosscuts_of_fig2c() {
        let q = fixtures::fig2c();
        let cuts = q.crosscuts(2).unwrap();
        assert!(cuts.contains(&vec![0, 2]));
        assert_eq!(q.min_crosscut_length().unwrap(), 2);
        assert!(cuts.contains(&vec![0, 3]));
        assert!(!cuts.contains(&vec![0, 1]));
    }

    #[test]
    fn minimal_elements_form_a_crosscut() {
        let d = fixtures::diamond();
        assert!(d.is_crosscut(&[0]).unwrap());
        assert!(d.is_crosscut(&[1, 2]).unwrap());
        assert!(!d.is_crosscut(&[1]).unwrap());
        let b = fixtures::fig2b();
        assert!(!b.is_crosscut(&[3, 4]).unwrap());
        assert_eq!(b.min_crosscut_length().unwrap(), 2);
    }

    #[test]
    fn maximal_chains_of_diamond() {
        let d = fixtures::diamond();
        assert_eq!(d.maximal_chains().unwrap(), vec![vec![0, 1, 3], vec![0, 2, 3]]);
    }
}
