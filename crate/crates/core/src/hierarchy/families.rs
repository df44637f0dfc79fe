use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::tree::pairing::unpair;
use crate::tree::TreeSpec;

/// Level-1 address of the `i`-th node with `n` children in `T_{Π₃}`.
/// Address 0 is kept free for the extra node of `T_{Σ₃}`.
pub fn pi3_address(n: u64, i: u64) -> u64 {
    crate::tree::pairing::pair(n, i) + 1
}

fn pi3_contains(node: &[u64], with_reserved: bool) -> bool {
    match node {
        [] => true,
        [0] | [0, _] => with_reserved,
        [a] => *a > 0,
        [a, j] => {
            let (n, _) = unpair(a - 1);
            *j < n
        }
        _ => false,
    }
}

/// Height 2: for every `n` the nodes `⟨pair(n,i)+1⟩` (`i ∈ ω`) each have
/// exactly the children `j < n`.
pub fn t_pi3() -> TreeSpec {
    TreeSpec::from_fn(|node| pi3_contains(node, false))
}

/// [`t_pi3`] plus the level-1 node `⟨0⟩`, which has every `⟨0, j⟩` as a child.
pub fn t_sigma3() -> TreeSpec {
    TreeSpec::from_fn(|node| pi3_contains(node, true))
}

fn pi_n(level: usize, node: &[u64]) -> bool {
    if level == 3 {
        return pi3_contains(node, false);
    }
    match node.split_first() {
        None => true,
        Some((0, _)) => false,
        Some((_, rest)) => sigma_n(level - 1, rest),
    }
}

fn sigma_n(level: usize, node: &[u64]) -> bool {
    if level == 3 {
        return pi3_contains(node, true);
    }
    match node.split_first() {
        None => true,
        Some((0, rest)) => pi_n(level - 1, rest),
        Some((_, rest)) => sigma_n(level - 1, rest),
    }
}

fn check_level(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::Level { level: n, min: 3 })
    } else {
        Ok(())
    }
}

/// `T_{Π_{n+1}}` has the level-1 nodes `⟨x+1⟩`, each carrying `T_{Σ_n}`.
pub fn t_pin(n: usize) -> Result<TreeSpec> {
    check_level(n)?;
    Ok(TreeSpec::from_fn(move |node| pi_n(n, node)))
}

/// `T_{Σ_{n+1}}` is `T_{Π_{n+1}}` with the extra level-1 node `⟨0⟩`
/// carrying `T_{Π_n}`.
pub fn t_sigman(n: usize) -> Result<TreeSpec> {
    check_level(n)?;
    Ok(TreeSpec::from_fn(move |node| sigma_n(n, node)))
}

/// Multiset of child counts of the level-1 nodes `⟨a⟩`, `a < width`,
/// counting children below `width`. Maps child count to multiplicity.
pub fn height2_signature(t: &TreeSpec, width: u64) -> BTreeMap<u64, usize> {
    let mut sig = BTreeMap::new();
    for node in t.children(&[], width) {
        *sig.entry(t.children(&node, width).len() as u64).or_insert(0) += 1;
    }
    sig
}

/// Level-1 addresses `a < addresses` whose child count at width `wide`
/// exceeds the count at width `narrow`. A surrogate for "has infinitely
/// many children".
pub fn growing_level1(t: &TreeSpec, addresses: u64, narrow: u64, wide: u64) -> Vec<u64> {
    (0..addresses)
        .filter(|&a| t.contains(&[a]))
        .filter(|&a| t.children(&[a], wide).len() > t.children(&[a], narrow).len())
        .collect()
}
