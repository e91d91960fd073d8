//! Named relations used by tests, the acceptance suite and the CLI demos.
//!
//! `fig2a`, `fig2b` and `fig2c` are the three relations of the two-step
//! worked example. They were reconstructed from the textual constraints the
//! example states (stability, the single unlocked clasp, the compression map
//! and the grading sets it reports), so the demos print a caveat next to them.

use crate::relation::FiniteRelation;

fn reflexive(n: usize, arrows: &[(usize, usize)]) -> FiniteRelation {
    FiniteRelation::on_range(n, |i, j| i == j || arrows.contains(&(i + 1, j + 1)))
}

/// 1 < 2 < 3.
pub fn chain3() -> FiniteRelation {
    reflexive(3, &[(1, 2), (2, 3), (1, 3)])
}

/// The total order 1 < 2 < … < n.
pub fn chain(n: usize) -> FiniteRelation {
    FiniteRelation::on_range(n, |i, j| i <= j)
}

/// 0 < 1 < 3 and 0 < 2 < 3.
pub fn diamond() -> FiniteRelation {
    FiniteRelation::new(
        ["0", "1", "2", "3"],
        [("0", "1"), ("0", "2"), ("1", "3"), ("2", "3"), ("0", "3")],
    )
    .expect("static fixture")
    .reflexive_closure()
}

/// Stable relation on {1,2,3,4} whose only clasp is 2 (unlocked).
pub fn fig2a() -> FiniteRelation {
    reflexive(4, &[(1, 2), (2, 3), (2, 4), (3, 4), (4, 3)])
}

/// Preorder on {1,…,5} compressing onto [`fig2a`]; 4 and 5 are paired.
pub fn fig2b() -> FiniteRelation {
    reflexive(5, &[(1, 2), (3, 4), (3, 5), (4, 5), (5, 4)])
}

/// Paired quotient of [`fig2b`]: the partial order 1 < 2, 3 < 4.
pub fn fig2c() -> FiniteRelation {
    reflexive(4, &[(1, 2), (3, 4)])
}

/// The compression θ : X₂ → X₁ from [`fig2b`] onto [`fig2a`].
pub const FIG2_THETA: [(&str, &str); 5] = [("1", "1"), ("2", "2"), ("3", "2"), ("4", "3"), ("5", "4")];

/// Reflexive closure of 1→2→3→4 with 1→4: balanced, clasps 2 and 3.
pub fn square4() -> FiniteRelation {
    reflexive(4, &[(1, 2), (2, 3), (3, 4), (1, 4)])
}

/// [`square4`] plus 1→3: not balanced, witness (1,2,3,4).
pub fn unbalanced4() -> FiniteRelation {
    reflexive(4, &[(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)])
}

/// Balanced but not stable: 3→1→2→4 with 3→2 and 1→4 yet 3↛4.
pub fn balanced_unstable4() -> FiniteRelation {
    reflexive(4, &[(1, 2), (1, 4), (2, 4), (3, 1), (3, 2)])
}

/// The reflexive relation on atoms 1..=n whose off-diagonal part is selected
/// by the bits of `mask` (row-major over ordered pairs i ≠ j).
pub fn reflexive_from_mask(n: usize, mask: u64) -> FiniteRelation {
    let mut bit = 0;
    let mut chosen = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                chosen[i * n + j] = mask >> bit & 1 == 1;
                bit += 1;
            }
        }
    }
    FiniteRelation::on_range(n, |i, j| i == j || chosen[i * n + j])
}

/// Every reflexive relation on `n` atoms, in mask order.
pub fn all_reflexive(n: usize) -> impl Iterator<Item = FiniteRelation> {
    let bits = n * n.saturating_sub(1);
    (0..1u64 << bits).map(move |m| reflexive_from_mask(n, m))
}
