//! The tree pipeline behind the linear-order operation `I`: unpairing,
//! padding with a free binary coordinate, and merging the two finite
//! coordinates into one.
//!
//! Coordinate layout of an entry at each level:
//!
//! | tree | alphabet | entry code                   |
//! |------|----------|------------------------------|
//! | T₁   | 2×ω      | `pair(σ(i), τ(i))`           |
//! | T₂   | 2×2×ω    | `pair(pair(σ(i), τ(i)), ρ(i))` |
//! | T₃   | 4×ω      | `pair(2σ(i) + τ(i), ρ(i))`   |
//!
//! In T₂ the padded binary coordinate sits in the middle; the ω coordinate
//! is always last.

use super::order::{kleene_brouwer, omega_multiple, LinearOrderSpec};
use super::pairing::{self, pair};
use super::{Node, TreeSpec};

/// Interleaving `σ(0),τ(0),…` of a node over 2×ω, or `None` if some `σ(i) > 1`.
fn interleave(node: &[u64]) -> Option<Node> {
    let mut out = Vec::with_capacity(node.len() * 2);
    for &code in node {
        let (bit, x) = pairing::unpair(code);
        if bit > 1 {
            return None;
        }
        out.push(bit);
        out.push(x);
    }
    Some(out)
}

/// T₁: `(σ, τ) ∈ T₁` iff `σ ∈ 2^{<ω}` and `σ(0)τ(0)σ(1)τ(1)… ∈ t0`.
pub fn unpair(t0: &TreeSpec) -> TreeSpec {
    let t0 = t0.clone();
    TreeSpec::from_fn(move |node| interleave(node).is_some_and(|seq| t0.contains(&seq)))
}

/// T₂ = T₁ × 2^{<ω} with the binary coordinate inserted second.
pub fn pad_product(t1: &TreeSpec) -> TreeSpec {
    let t1 = t1.clone();
    TreeSpec::from_fn(move |node| {
        let mut projected = Vec::with_capacity(node.len());
        for &code in node {
            let (head, rho) = pairing::unpair(code);
            let (sigma, tau) = pairing::unpair(head);
            if tau > 1 {
                return false;
            }
            projected.push(pair(sigma, rho));
        }
        t1.contains(&projected)
    })
}

/// T₃: merges the first two coordinates of T₂ via `(a, b) ↦ 2a + b`.
pub fn pair_coords(t2: &TreeSpec) -> TreeSpec {
    let t2 = t2.clone();
    TreeSpec::from_fn(move |node| {
        let mut expanded = Vec::with_capacity(node.len());
        for &code in node {
            let (q, rho) = pairing::unpair(code);
            if q > 3 {
                return false;
            }
            expanded.push(pair(pair(q / 2, q % 2), rho));
        }
        t2.contains(&expanded)
    })
}

/// Inverse of [`pair_coords`]: recovers the 2×2×ω tree.
pub fn split_coords(t3: &TreeSpec) -> TreeSpec {
    let t3 = t3.clone();
    TreeSpec::from_fn(move |node| {
        let mut merged = Vec::with_capacity(node.len());
        for &code in node {
            let (head, rho) = pairing::unpair(code);
            let (a, b) = pairing::unpair(head);
            if a > 1 || b > 1 {
                return false;
            }
            merged.push(pair(2 * a + b, rho));
        }
        t3.contains(&merged)
    })
}

/// Every intermediate tree of the `I` pipeline.
#[derive(Debug, Clone)]
pub struct IPipeline {
    pub t1: TreeSpec,
    pub t2: TreeSpec,
    pub t3: TreeSpec,
    pub t4: TreeSpec,
}

impl IPipeline {
    /// Runs the tree stages. `t4_override` replaces T₄; the default is
    /// T₄ := T₃ (no subtraction step is performed).
    pub fn new(t0: &TreeSpec, t4_override: Option<TreeSpec>) -> Self {
        let t1 = unpair(t0);
        let t2 = pad_product(&t1);
        let t3 = pair_coords(&t2);
        let t4 = t4_override.unwrap_or_else(|| t3.clone());
        IPipeline { t1, t2, t3, t4 }
    }
}

/// `I(t)`: the Kleene–Brouwer order of T₄, truncated at `(depth, width)`,
/// followed by ω copies of it.
pub fn i_transform(
    t: &TreeSpec,
    t4_override: Option<TreeSpec>,
    depth: usize,
    width: u64,
) -> LinearOrderSpec {
    let p = IPipeline::new(t, t4_override);
    omega_multiple(&kleene_brouwer(&p.t4, depth, width))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::FiniteTree;

    fn binary_full() -> TreeSpec {
        TreeSpec::from_fn(|n| n.iter().all(|&x| x <= 1))
    }

    #[test]
    fn unpair_examples() {
        assert!(unpair(&TreeSpec::empty()).truncate(3, 10).is_empty());
        let t1 = unpair(&binary_full());
        assert!(t1.contains(&[pair(0, 1)]));
        // only λ and ⟨0⟩: no interleaving of length 2 survives
        let small = FiniteTree::closure_of([vec![0]]).to_spec();
        let brute: Vec<_> = (0..40)
            .filter(|&c| unpair(&small).contains(&[c]))
            .collect();
        assert!(brute.is_empty());
        assert_eq!(unpair(&small).truncate(3, 40).len(), 1);
    }

    #[test]
    fn pad_doubles_first_level() {
        let t1 = unpair(&binary_full());
        let w = 40;
        let c1 = t1.children(&[], w).len();
        let c2 = pad_product(&t1).children(&[], w * w).len();
        assert_eq!(c1, 4);
        assert_eq!(c2, 2 * c1);
        assert!(pad_product(&t1).contains(&[]));
        assert!(!pad_product(&unpair(&TreeSpec::empty())).contains(&[]));
    }

    #[test]
    fn pair_coords_preserves_level_counts_and_inverts() {
        let t2 = pad_product(&unpair(&binary_full()));
        let t3 = pair_coords(&t2);
        let count = |t: &TreeSpec, d: usize, w: u64| {
            t.truncate(d, w).nodes().filter(|n| n.len() == d).count()
        };
        // widths large enough that every coordinate value <= 1 is codable
        assert_eq!(count(&t2, 1, 200), count(&t3, 1, 200));
        assert_eq!(count(&t2, 2, 200), count(&t3, 2, 200));
        let back = split_coords(&t3);
        assert_eq!(back.truncate(2, 60), t2.truncate(2, 60));
    }

    #[test]
    fn root_only_input_gives_omega() {
        let order = i_transform(&TreeSpec::root_only(), None, 4, 30);
        assert_eq!(order.size(), None);
        let first: Vec<_> = order.prefix(5);
        assert_eq!(first.len(), 5);
        for w in first.windows(2) {
            assert!(order.less(&w[0], &w[1]));
        }
    }
}
