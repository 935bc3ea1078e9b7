mod common;

use common::{all_perms, random_perm};
use permpat_core::oracle::{oracle_is_simple, oracle_separable};
use permpat_core::{
    common_intervals, decomposition_tree, expand_tree, is_separable, is_simple, max_prime_arity, separating_tree,
    strong_intervals, tree_to_permutation, DecompTree, NodeKind, Permutation,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max).prop_flat_map(|n| {
        Just((1..=n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    })
}

/// Prime / linear typing straight from the definition: look at every union
/// of consecutive children.
fn check_typing(tree: &DecompTree) {
    for node in tree.nodes() {
        if node.children.is_empty() {
            continue;
        }
        let ranges: Vec<_> = node.children.iter().map(|&c| tree.node(c).value_range).collect();
        let k = ranges.len();
        let unions: Vec<bool> = (0..k)
            .flat_map(|x| (x + 1..k).map(move |y| (x, y)))
            .filter(|&(x, y)| (x, y) != (0, k - 1))
            .map(|(x, y)| {
                let lo = ranges[x..=y].iter().map(|r| r.min).min().unwrap();
                let hi = ranges[x..=y].iter().map(|r| r.max).max().unwrap();
                let width: u32 = ranges[x..=y].iter().map(|r| r.max - r.min + 1).sum();
                hi - lo + 1 == width
            })
            .collect();
        let linear = unions.iter().all(|&u| u);
        let prime = unions.iter().all(|&u| !u);
        match &node.kind {
            NodeKind::Linear(_) => assert!(linear, "{node:?}"),
            NodeKind::Prime(label) => {
                assert!(prime && !linear, "{node:?}");
                assert!(k >= 4);
                assert!(oracle_is_simple(&label.to_permutation().unwrap()), "{label}");
            }
            NodeKind::Leaf(_) => unreachable!(),
        }
    }
}

proptest! {
    #[test]
    fn round_trip(sigma in arb_perm(12)) {
        let tree = decomposition_tree(&sigma);
        prop_assert_eq!(&tree_to_permutation(&tree).unwrap(), &sigma);
        prop_assert_eq!(&tree_to_permutation(&expand_tree(&tree)).unwrap(), &sigma);
        prop_assert_eq!(&tree.decorated_permutation(), &sigma);
    }

    #[test]
    fn strong_intervals_nest(sigma in arb_perm(12)) {
        let common = common_intervals(&sigma);
        let strong = strong_intervals(&sigma);
        for s in &strong {
            prop_assert!(common.contains(s));
            for t in &strong {
                let disjoint = s.hi < t.lo || t.hi < s.lo;
                prop_assert!(disjoint || s.contains(t) || t.contains(s));
            }
        }
        prop_assert!(strong.contains(&permpat_core::IntervalSpan::new(1, sigma.len())));
    }

    #[test]
    fn node_invariants(sigma in arb_perm(14)) {
        let tree = decomposition_tree(&sigma);
        check_typing(&tree);
        for node in tree.nodes() {
            let width = (node.value_range.max - node.value_range.min + 1) as usize;
            prop_assert_eq!(width, node.span.width());
            let mut next = node.span.lo;
            for &c in &node.children {
                prop_assert_eq!(tree.node(c).span.lo, next);
                next = tree.node(c).span.hi + 1;
            }
            if let NodeKind::Linear(sign) = node.kind {
                prop_assert!(node.children.len() >= 2);
                for &c in &node.children {
                    prop_assert_ne!(tree.node(c).kind.clone(), NodeKind::Linear(sign));
                }
            }
        }
        let expanded = expand_tree(&tree);
        prop_assert_eq!(max_prime_arity(&expanded), max_prime_arity(&tree));
        for node in expanded.nodes() {
            if matches!(node.kind, NodeKind::Linear(_)) {
                prop_assert_eq!(node.children.len(), 2);
            }
        }
    }
}

#[test]
fn separability_matches_avoidance_to_size_8() {
    for n in 1..=8 {
        for sigma in all_perms(n) {
            assert_eq!(is_separable(&sigma), oracle_separable(&sigma), "{sigma}");
        }
    }
}

#[test]
fn simplicity_matches_oracle() {
    for n in 1..=7 {
        for sigma in all_perms(n) {
            let simple = oracle_is_simple(&sigma);
            assert_eq!(is_simple(&sigma), simple, "{sigma}");
            if n >= 4 {
                let tree = decomposition_tree(&sigma);
                let single_prime = tree.len() == n + 1 && max_prime_arity(&tree) == n;
                assert_eq!(single_prime, simple, "{sigma}");
            }
        }
    }
}

#[test]
fn separating_trees_are_binary_for_random_separable() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let sigma = common::random_separable(&mut rng, 15);
        let tree = separating_tree(&sigma).unwrap();
        assert_eq!(tree.len(), 2 * sigma.len() - 1);
        assert_eq!(tree_to_permutation(&tree).unwrap(), sigma);
    }
    let sigma = random_perm(&mut rng, 30);
    let _ = separating_tree(&sigma);
}
