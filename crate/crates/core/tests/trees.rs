mod common;

use std::collections::BTreeSet;

use ce_core::tree::{
    canonical_form, finite_tree_rank, i_transform, kb_less, kleene_brouwer, pad_product,
    pair_coords, split_coords, tree_isomorphic, unpair, Elem, FiniteTree, TreeSpec,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_tree() -> impl Strategy<Value = FiniteTree> {
    (1usize..40, any::<u64>()).prop_map(|(size, seed)| {
        common::random_tree(&mut ChaCha8Rng::seed_from_u64(seed), size, 4)
    })
}

fn downward_closed(t: &FiniteTree) -> bool {
    t.nodes().all(|n| n.is_empty() || t.contains(&n[..n.len() - 1]))
}

proptest! {
    #[test]
    fn truncations_are_downward_closed(t in arb_tree(), depth in 0usize..6, width in 1u64..5) {
        prop_assert!(downward_closed(&t.truncate(depth, width)));
        prop_assert!(downward_closed(&t.to_spec().truncate(depth, width)));
        prop_assert_eq!(t.to_spec().truncate(depth, width), t.truncate(depth, width));
    }

    #[test]
    fn transforms_stay_downward_closed(t in arb_tree()) {
        let t0 = t.to_spec();
        let t1 = unpair(&t0);
        let t2 = pad_product(&t1);
        let t3 = pair_coords(&t2);
        let t4 = split_coords(&t3);
        for spec in [&t1, &t2, &t3, &t4] {
            prop_assert!(downward_closed(&spec.truncate(3, 12)));
        }
    }

    #[test]
    fn kb_is_strict_total_and_extension_is_smaller(t in arb_tree()) {
        let kb = kleene_brouwer(&t.to_spec(), 64, 64);
        let xs: Vec<Elem> = t.nodes().cloned().map(Elem::Node).collect();
        prop_assert_eq!(kb.size(), Some(t.len()));
        prop_assert!(kb.check_strict_total(&xs).is_ok());
        for a in t.nodes() {
            for b in t.nodes() {
                if b.len() > a.len() && b.starts_with(a) {
                    prop_assert!(kb_less(b, a));
                }
            }
        }
    }

    #[test]
    fn isomorphism_ignores_relabelling(t in arb_tree(), shift in 1u64..9) {
        // relabel every entry by a per-depth injection
        let moved = FiniteTree::from_nodes(t.nodes().map(|n| {
            n.iter().enumerate().map(|(d, &x)| x * (d as u64 + 2) + shift).collect()
        })).unwrap();
        prop_assert!(tree_isomorphic(&t, &moved));
        prop_assert_eq!(finite_tree_rank(&t).unwrap(), finite_tree_rank(&moved).unwrap());
    }
}

#[test]
fn isomorphism_matches_bijection_search_on_small_trees() {
    let trees: Vec<FiniteTree> = (1..=7).flat_map(common::plane_trees).collect();
    assert_eq!(trees.len(), 1 + 1 + 2 + 5 + 14 + 42 + 132);
    for a in &trees {
        for b in &trees {
            assert_eq!(
                tree_isomorphic(a, b),
                common::brute_isomorphic(a, b),
                "{a:?} vs {b:?}"
            );
        }
    }
    let classes: BTreeSet<String> = trees.iter().map(canonical_form).collect();
    // rooted unlabelled trees with 1..=7 nodes
    assert_eq!(classes.len(), 1 + 1 + 2 + 4 + 9 + 20 + 48);
}

#[test]
fn star_rank_and_chain_rank() {
    assert_eq!(finite_tree_rank(&FiniteTree::star(3)).unwrap(), 1);
    assert_eq!(finite_tree_rank(&FiniteTree::chain(5)).unwrap(), 5);
}

#[test]
fn i_transform_of_a_chain_repeats_its_kb_order() {
    let l = i_transform(&TreeSpec::zeros_path(), None, 3, 4);
    assert_eq!(l.size(), None);
    let first = l.nth(0).unwrap();
    let later = l.nth(100).unwrap();
    assert!(matches!(first, Elem::Copy(0, _)));
    assert!(l.less(&first, &later) || l.less(&later, &first));
}
