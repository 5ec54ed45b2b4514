//! Ground-truth solvers: canonical-tree enumeration, exhaustive Steiner-subset
//! search, and the Dreyfus–Wagner dynamic program.
//!
//! The three routes are independent. Enumeration is the slowest and serves
//! as the oracle for the other two on small instances; subset search backs
//! [`brute_force_opt`]; Dreyfus–Wagner scales with the terminal count instead
//! of the vertex count.

mod budget;
mod dreyfus_wagner;
mod enumerate;
mod subset;

pub use budget::EnumerationBudget;
pub use dreyfus_wagner::{dreyfus_wagner, dreyfus_wagner_with, DwConfig};
pub use enumerate::{enumerate_canonical_trees, CanonicalTrees, EnumerationStatus};

pub(crate) use budget::Tracker;

use crate::error::{Error, Result};
use crate::model::{Edge, Instance, SteinerTree, Weights};

/// Relative gap below which two trees count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Which exact algorithm answers an inner optimisation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ExactMethod {
    /// Pick whichever of the two is cheaper for the instance shape.
    #[default]
    Auto,
    SubsetMst,
    DreyfusWagner,
}

/// An optimum together with the best canonical tree different from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub tree: SteinerTree,
    pub weight: f64,
    pub unique: bool,
    pub runner_up: Option<(SteinerTree, f64)>,
}

/// Minimum-weight canonical Steiner tree by exhaustive search over Steiner
/// subsets, with a uniqueness verdict at relative tolerance [`TIE_TOL`].
pub fn brute_force_opt(instance: &Instance, budget: EnumerationBudget) -> Result<ExactSolution> {
    budget.check()?;
    let steiner = instance.vertex_count() - instance.terminals().len();
    if !budget.covers(steiner) {
        return Err(Error::BudgetExceeded(format!(
            "Steiner subsets limited to size {} but {steiner} candidates exist",
            budget.max_steiner_subset_size.unwrap_or(0)
        )));
    }
    let mut tracker = budget.tracker();
    solve_with_runner_up(ExactMethod::SubsetMst, instance, &mut tracker)
}

/// Minimum-weight canonical tree with the chosen method, without the
/// uniqueness analysis. Instances with fewer than two terminals yield the
/// empty tree.
pub fn solve_exact(
    instance: &Instance,
    method: ExactMethod,
    budget: EnumerationBudget,
) -> Result<(SteinerTree, f64)> {
    budget.check()?;
    let steiner = instance.vertex_count() - instance.terminals().len();
    if method != ExactMethod::DreyfusWagner && !budget.covers(steiner) {
        return Err(Error::BudgetExceeded(format!(
            "Steiner subsets limited below the {steiner} candidates"
        )));
    }
    let mask = is_terminal_mask(instance);
    solve_weights(method, &instance.weights, &mask, &mut budget.tracker())?
        .ok_or_else(|| Error::InvalidTree("terminals are not connected".into()))
}

pub(crate) fn is_terminal_mask(instance: &Instance) -> Vec<bool> {
    instance
        .vertices()
        .map(|v| instance.is_terminal(v))
        .collect()
}

pub(crate) fn solve_with_runner_up(
    method: ExactMethod,
    instance: &Instance,
    tracker: &mut Tracker,
) -> Result<ExactSolution> {
    let mask = is_terminal_mask(instance);
    let (tree, weight) = solve_weights(method, &instance.weights, &mask, tracker)?
        .ok_or_else(|| Error::InvalidTree("terminals are not connected".into()))?;
    let runner_up = runner_up(method, &instance.weights, &mask, &tree, tracker)?;
    let unique = runner_up
        .as_ref()
        .is_none_or(|(_, rw)| rw - weight > TIE_TOL * weight);
    Ok(ExactSolution {
        tree,
        weight,
        unique,
        runner_up,
    })
}

/// Solves the Steiner problem on raw weights with the chosen method.
pub(crate) fn solve_weights(
    method: ExactMethod,
    w: &Weights,
    is_terminal: &[bool],
    tracker: &mut Tracker,
) -> Result<Option<(SteinerTree, f64)>> {
    match resolve(method, w.len(), is_terminal.iter().filter(|&&t| t).count()) {
        ExactMethod::DreyfusWagner => {
            dreyfus_wagner::dw_solve(w, is_terminal, DwConfig::default(), tracker)
        }
        _ => subset::subset_mst_opt(w, is_terminal, w.len(), tracker),
    }
}

fn resolve(method: ExactMethod, n: usize, t: usize) -> ExactMethod {
    if method != ExactMethod::Auto {
        return method;
    }
    let n_f = n as f64;
    let subset_cost = 2f64.powi((n - t) as i32) * (t as f64 + 2.0).powi(2);
    let dw_cost = 3f64.powi(t as i32) * n_f + 2f64.powi(t as i32) * n_f * n_f + n_f.powi(3);
    if t > DwConfig::default().max_terminals || subset_cost <= dw_cost {
        ExactMethod::SubsetMst
    } else {
        ExactMethod::DreyfusWagner
    }
}

pub(crate) fn forbid(w: &Weights, e: Edge) -> Weights {
    let mut out = w.clone();
    out.set(e.lo().0, e.hi().0, f64::INFINITY);
    out
}

/// Lightest canonical tree different from `opt`. Any such tree misses at
/// least one edge of `opt`, so it is the best optimum over the instances
/// with one `opt` edge forbidden.
pub(crate) fn runner_up(
    method: ExactMethod,
    w: &Weights,
    is_terminal: &[bool],
    opt: &SteinerTree,
    tracker: &mut Tracker,
) -> Result<Option<(SteinerTree, f64)>> {
    let mut best: Option<(SteinerTree, f64)> = None;
    for e in opt.edges() {
        let Some((tree, _)) = solve_weights(method, &forbid(w, e), is_terminal, tracker)? else {
            continue;
        };
        let weight = w.sum(tree.edge_set());
        let better = match &best {
            None => true,
            Some((bt, bw)) => weight < *bw || (weight == *bw && tree < *bt),
        };
        if better {
            best = Some((tree, weight));
        }
    }
    Ok(best)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::model::{tree_weight, VertexId};

    pub(crate) fn triangle() -> Instance {
        Instance::complete(
            vec![
                vec![0.0, 1.0, 2.9],
                vec![1.0, 0.0, 2.0],
                vec![2.9, 2.0, 0.0],
            ],
            &[VertexId(0), VertexId(1), VertexId(2)],
        )
        .unwrap()
    }

    /// Terminals 0, 1, 2 pairwise 2 apart; vertex 3 at distance 1 from each.
    pub(crate) fn star() -> Instance {
        let mut w = vec![vec![2.0; 4]; 4];
        for (i, row) in w.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for i in 0..3 {
            w[i][3] = 1.0;
            w[3][i] = 1.0;
        }
        Instance::complete(w, &[VertexId(0), VertexId(1), VertexId(2)]).unwrap()
    }

    fn enumerate_min(inst: &Instance) -> (SteinerTree, f64) {
        enumerate_canonical_trees(inst, EnumerationBudget::default())
            .map(|t| {
                let w = tree_weight(inst, &t).unwrap();
                (t, w)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .unwrap()
    }

    #[test]
    fn triangle_optimum() {
        let inst = triangle();
        let sol = brute_force_opt(&inst, EnumerationBudget::default()).unwrap();
        assert_eq!(
            sol.tree,
            SteinerTree::from_edges([Edge::new(0, 1), Edge::new(1, 2)])
        );
        assert_eq!(sol.weight, 3.0);
        assert!(sol.unique);
        assert_eq!(enumerate_min(&inst).0, sol.tree);
    }

    #[test]
    fn star_optimum() {
        let inst = star();
        let sol = brute_force_opt(&inst, EnumerationBudget::default()).unwrap();
        let star = SteinerTree::from_edges([Edge::new(0, 3), Edge::new(1, 3), Edge::new(2, 3)]);
        assert_eq!(sol.tree, star);
        assert_eq!(sol.weight, 3.0);
        assert!(sol.unique);
        assert_eq!(enumerate_min(&inst), (star.clone(), 3.0));
        let (dw, w) = dreyfus_wagner(&inst).unwrap();
        assert_eq!((dw, w), (star, 3.0));
    }

    #[test]
    fn two_terminals() {
        let inst = Instance::complete(
            vec![vec![0.0, 7.0], vec![7.0, 0.0]],
            &[VertexId(0), VertexId(1)],
        )
        .unwrap();
        let sol = brute_force_opt(&inst, EnumerationBudget::default()).unwrap();
        assert_eq!(sol.weight, 7.0);
        assert!(sol.unique);
        assert!(sol.runner_up.is_none());
        assert_eq!(dreyfus_wagner(&inst).unwrap().1, 7.0);
    }

    #[test]
    fn ties_are_reported() {
        // Equilateral triangle: all three paths tie.
        let inst = Instance::complete(
            vec![
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
            &[VertexId(0), VertexId(1), VertexId(2)],
        )
        .unwrap();
        let sol = brute_force_opt(&inst, EnumerationBudget::default()).unwrap();
        assert!(!sol.unique);
        assert_eq!(
            sol.tree,
            SteinerTree::from_edges([Edge::new(0, 1), Edge::new(0, 2)])
        );
    }

    #[test]
    fn budget_limits_are_reported() {
        let inst = star();
        assert!(matches!(
            brute_force_opt(
                &inst,
                EnumerationBudget::default().with_max_steiner_subset_size(0)
            ),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(
            brute_force_opt(&inst, EnumerationBudget::default().with_max_trees(1)),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn dw_rejects_too_many_terminals() {
        let inst = triangle();
        assert!(matches!(
            dreyfus_wagner_with(&inst, DwConfig { max_terminals: 2 }),
            Err(Error::TooManyTerminals { count: 3, limit: 2 })
        ));
    }

    #[test]
    fn forbidden_edges_route_around() {
        let inst = triangle();
        let mask = is_terminal_mask(&inst);
        let w = forbid(&inst.weights, Edge::new(1, 2));
        for method in [ExactMethod::SubsetMst, ExactMethod::DreyfusWagner] {
            let (tree, weight) = solve_weights(method, &w, &mask, &mut Tracker::unlimited())
                .unwrap()
                .unwrap();
            assert_eq!(
                tree,
                SteinerTree::from_edges([Edge::new(0, 1), Edge::new(0, 2)])
            );
            assert_eq!(weight, 3.9);
        }
    }
}
