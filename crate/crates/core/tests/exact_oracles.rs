//! The three exact routes — subset brute force, Dreyfus–Wagner and full
//! enumeration — agree on random instances.

use proptest::prelude::*;

use steiner_stability::exact::{
    brute_force_opt, dreyfus_wagner, enumerate_canonical_trees, solve_exact, EnumerationBudget,
    ExactMethod,
};
use steiner_stability::generators::{sample, GenSpec};
use steiner_stability::model::tree_weight;
use steiner_stability::Error;

fn spec(metric: bool, n: usize, t: usize, seed: u64) -> GenSpec {
    if metric {
        GenSpec::random_metric(n, t, seed)
    } else {
        GenSpec::euclidean(2, n, t, seed)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_minimum_matches_exact_solvers(
        metric in any::<bool>(),
        n in 3usize..=7,
        t in 2usize..=4,
        seed in 0u64..10_000,
    ) {
        let inst = sample(&spec(metric, n, t.min(n), seed)).unwrap();
        let budget = EnumerationBudget::unlimited();
        let bf = brute_force_opt(&inst, budget).unwrap();
        let (_, dw) = dreyfus_wagner(&inst).unwrap();
        let best = enumerate_canonical_trees(&inst, budget)
            .map(|tree| tree_weight(&inst, &tree).unwrap())
            .fold(f64::INFINITY, f64::min);
        prop_assert!((bf.weight - dw).abs() <= 1e-9 * bf.weight);
        prop_assert!((bf.weight - best).abs() <= 1e-9 * bf.weight);
        prop_assert!((tree_weight(&inst, &bf.tree).unwrap() - bf.weight).abs() <= 1e-9 * bf.weight);
    }

    #[test]
    fn enumerated_trees_are_valid_canonical_and_distinct(
        n in 3usize..=6,
        t in 2usize..=4,
        seed in 0u64..10_000,
    ) {
        let inst = sample(&spec(true, n, t.min(n), seed)).unwrap();
        let trees: Vec<_> = enumerate_canonical_trees(&inst, EnumerationBudget::unlimited()).collect();
        for tree in &trees {
            prop_assert!(tree.check(&inst).is_ok());
            prop_assert!(tree.is_canonical(&inst));
        }
        let distinct: std::collections::BTreeSet<_> = trees.iter().map(|t| t.edge_set().clone()).collect();
        prop_assert_eq!(distinct.len(), trees.len());
    }

    #[test]
    fn runner_up_is_second_best(n in 3usize..=6, seed in 0u64..10_000) {
        let inst = sample(&spec(true, n, 3.min(n), seed)).unwrap();
        let budget = EnumerationBudget::unlimited();
        let sol = brute_force_opt(&inst, budget).unwrap();
        let mut weights: Vec<f64> = enumerate_canonical_trees(&inst, budget)
            .map(|tree| tree_weight(&inst, &tree).unwrap())
            .collect();
        weights.sort_by(f64::total_cmp);
        match sol.runner_up {
            Some((_, w)) => prop_assert!((w - weights[1]).abs() <= 1e-9 * w),
            None => prop_assert_eq!(weights.len(), 1),
        }
    }
}

#[test]
fn three_terminal_canonical_tree_count() {
    // Three terminals and one Steiner vertex: the 3 terminal spanning trees
    // plus the 16 − 9 labelled trees on all four vertices in which the
    // Steiner vertex is not a leaf.
    let inst = sample(&GenSpec::random_metric(4, 3, 1)).unwrap();
    let count = enumerate_canonical_trees(&inst, EnumerationBudget::unlimited()).count();
    assert_eq!(count, 10);
}

#[test]
fn subset_budget_is_reported_not_truncated() {
    let inst = sample(&GenSpec::random_metric(7, 3, 2)).unwrap();
    let budget = EnumerationBudget::unlimited().with_max_steiner_subset_size(1);
    assert!(matches!(
        brute_force_opt(&inst, budget),
        Err(Error::BudgetExceeded(_))
    ));
    assert!(matches!(
        solve_exact(&inst, ExactMethod::SubsetMst, budget),
        Err(Error::BudgetExceeded(_))
    ));
    // Dreyfus–Wagner does not enumerate subsets and ignores that limit.
    assert!(solve_exact(&inst, ExactMethod::DreyfusWagner, budget).is_ok());
}

#[test]
fn tree_budget_stops_enumeration() {
    let inst = sample(&GenSpec::random_metric(7, 4, 3)).unwrap();
    let budget = EnumerationBudget::unlimited().with_max_trees(5);
    let mut stream = enumerate_canonical_trees(&inst, budget);
    let seen = stream.by_ref().count();
    assert!(seen <= 5);
    assert!(!stream.is_exhaustive());
}
