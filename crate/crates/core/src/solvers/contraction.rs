use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::exact::{
    brute_force_opt, is_terminal_mask, solve_exact, solve_with_runner_up, EnumerationBudget,
    ExactMethod,
};
use crate::model::{prune_leaves, tree_weight, Edge, Instance, SteinerTree, VertexId, Weights};

use super::mst_terminals;

/// An approximation algorithm plugged into [`contract_solve`]: given an
/// instance and ε it must return a valid canonical tree of weight at most
/// `(1+ε)` times the optimum. Implementations are shared across sweeps, so
/// they must be reentrant.
pub trait InnerOracle: Send + Sync {
    fn label(&self) -> &str;
    fn solve(&self, instance: &Instance, epsilon: f64) -> Result<SteinerTree>;
}

/// Returns an exact optimum; trivially meets any ε.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOracle {
    pub method: ExactMethod,
}

impl InnerOracle for ExactOracle {
    fn label(&self) -> &str {
        "exact"
    }

    fn solve(&self, instance: &Instance, _epsilon: f64) -> Result<SteinerTree> {
        Ok(solve_exact(instance, self.method, EnumerationBudget::default())?.0)
    }
}

/// The terminal spanning tree: a 2-approximation, far outside the ε
/// contract. Useful to show that the contract matters.
#[derive(Debug, Clone, Copy, Default)]
pub struct MstOracle;

impl InnerOracle for MstOracle {
    fn label(&self) -> &str {
        "mst"
    }

    fn solve(&self, instance: &Instance, _epsilon: f64) -> Result<SteinerTree> {
        Ok(mst_terminals(instance))
    }
}

/// The most adversarial answer an exact solver can give within the
/// contract: the second-best canonical tree whenever it is within a factor
/// `(1+ε)` of the optimum, the optimum otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct FuzzedExactOracle;

impl InnerOracle for FuzzedExactOracle {
    fn label(&self) -> &str {
        "fuzzed-exact"
    }

    fn solve(&self, instance: &Instance, epsilon: f64) -> Result<SteinerTree> {
        let sol = solve_with_runner_up(
            ExactMethod::Auto,
            instance,
            &mut EnumerationBudget::default().tracker(),
        )?;
        Ok(match sol.runner_up {
            Some((tree, w)) if w <= (1.0 + epsilon) * sol.weight => tree,
            _ => sol.tree,
        })
    }
}

/// How a contracted instance relates to the one it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Contraction {
    /// New id of every source vertex; both endpoints map to the merged one.
    pub old_to_new: Vec<VertexId>,
    /// The contracted edge, in source ids.
    pub merged: Edge,
    /// For each edge of the contracted instance, the source edges along the
    /// path whose length its weight is.
    pub expansion: BTreeMap<Edge, Vec<Edge>>,
}

/// Merges the endpoints of `edge` into one vertex, terminal when either
/// endpoint was. A pair touching the merged vertex starts at the lighter of
/// its two source weights; since that alone can break the triangle
/// inequality, the result is then metrically closed, and every new weight
/// remembers the source path realising it.
pub fn contract_edge(instance: &Instance, edge: Edge) -> Result<(Instance, Contraction)> {
    let n = instance.vertex_count();
    if !instance.contains(edge.hi()) {
        return Err(Error::UnknownEdge(edge.lo(), edge.hi()));
    }
    let (keep, gone) = (edge.lo().0, edge.hi().0);
    let old_to_new: Vec<VertexId> = (0..n)
        .map(|x| match x {
            x if x == gone => VertexId(keep),
            x if x > gone => VertexId(x - 1),
            x => VertexId(x),
        })
        .collect();
    let m = n - 1;

    // Lightest direct source pair for every new pair.
    let mut dist = Weights::filled(m, f64::INFINITY);
    let mut origin: Vec<Option<Edge>> = vec![None; m * m];
    for e in instance.edges() {
        if e == edge {
            continue;
        }
        let (p, q) = (old_to_new[e.lo().0].0, old_to_new[e.hi().0].0);
        let w = instance.edge_weight(e);
        if w < dist.get(p, q) {
            dist.set(p, q, w);
            origin[p * m + q] = Some(e);
            origin[q * m + p] = Some(e);
        }
    }
    for p in 0..m {
        dist.set(p, p, 0.0);
    }

    // Floyd–Warshall with next hops to recover the realising paths.
    let mut next: Vec<usize> = (0..m * m).map(|i| i % m).collect();
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                let via = dist.get(i, k) + dist.get(k, j);
                if via < dist.get(i, j) {
                    dist.set(i, j, via);
                    next[j * m + i] = next[j * m + k];
                    next[i * m + j] = next[i * m + k];
                }
            }
        }
    }
    let mut expansion = BTreeMap::new();
    for p in 0..m {
        for q in p + 1..m {
            let mut path = Vec::new();
            let mut u = p;
            while u != q {
                let step = next[u * m + q];
                path.push(origin[u * m + step].expect("hop along an existing pair"));
                u = step;
            }
            expansion.insert(Edge::new(p, q), path);
        }
    }

    let mut is_terminal = vec![false; m];
    for v in instance.vertices() {
        if instance.is_terminal(v) {
            is_terminal[old_to_new[v.0].0] = true;
        }
    }
    let contracted = Instance::assemble(dist, is_terminal, None, true, false);
    Ok((
        contracted,
        Contraction {
            old_to_new,
            merged: edge,
            expansion,
        },
    ))
}

/// Settings for [`contract_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractConfig {
    /// Stop contracting once this many vertices remain.
    pub base_size: usize,
    /// Compare every oracle answer against the exact optimum.
    pub check_contract: bool,
    pub budget: EnumerationBudget,
}

impl Default for ContractConfig {
    fn default() -> Self {
        ContractConfig {
            base_size: 4,
            check_contract: true,
            budget: EnumerationBudget::default(),
        }
    }
}

/// One round of the contraction loop.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionStep {
    /// The heaviest edge of the oracle's tree, in ids of the instance it
    /// was taken from.
    pub edge: Edge,
    pub weight: f64,
    /// The same edge expanded to edges of the original instance.
    pub original: Vec<Edge>,
    pub size_before: usize,
    pub epsilon: f64,
}

/// Everything needed to map the final small solution back.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionTrace {
    pub steps: Vec<ContractionStep>,
    /// Optimum of the final contracted instance, in its own ids.
    pub base_tree: SteinerTree,
    pub base_weight: f64,
    /// Edges of the final contracted instance expanded to original edges.
    pub expansion: BTreeMap<Edge, Vec<Edge>>,
}

impl ContractionTrace {
    /// Sum of contracted edge weights and the base optimum's weight.
    pub fn reported_weight(&self) -> f64 {
        self.steps.iter().map(|s| s.weight).sum::<f64>() + self.base_weight
    }
}

/// Approximate, keep the heaviest returned edge, contract it, repeat.
///
/// Each round calls the oracle with `ε = (γ−1)/(2n)` for the current vertex
/// count `n`. For a γ-stable instance with γ < 2 the heaviest edge of any
/// such tree belongs to the optimum, so contracting it is safe. Once at most
/// `base_size` vertices remain (or all terminals have merged) the remainder
/// is solved exactly and everything is expanded back.
pub fn contract_solve(
    instance: &Instance,
    gamma: f64,
    oracle: &dyn InnerOracle,
    config: ContractConfig,
) -> Result<(SteinerTree, ContractionTrace)> {
    if gamma <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma must exceed 1, got {gamma}"
        )));
    }
    let mut current = instance.clone();
    let mut expansion: BTreeMap<Edge, Vec<Edge>> = instance.edges().map(|e| (e, vec![e])).collect();
    let mut steps = Vec::new();
    while current.vertex_count() > config.base_size && current.terminals().len() >= 2 {
        let n = current.vertex_count();
        let epsilon = (gamma - 1.0) / (2.0 * n as f64);
        let tree = oracle.solve(&current, epsilon)?;
        tree.check(&current)?;
        if config.check_contract {
            check_contract(&current, &tree, epsilon, oracle.label(), config.budget)?;
        }
        let Some((edge, weight)) = heaviest_edge(&current, &tree) else {
            break;
        };
        let (next, contraction) = contract_edge(&current, edge)?;
        let mut next_expansion = BTreeMap::new();
        for (new_edge, path) in &contraction.expansion {
            let original: Vec<Edge> = path
                .iter()
                .flat_map(|e| expansion[e].iter().copied())
                .collect();
            next_expansion.insert(*new_edge, original);
        }
        steps.push(ContractionStep {
            edge,
            weight,
            original: expansion[&edge].clone(),
            size_before: n,
            epsilon,
        });
        current = next;
        expansion = next_expansion;
    }
    let base = brute_force_opt(&current, config.budget)?;
    let trace = ContractionTrace {
        steps,
        base_tree: base.tree.clone(),
        base_weight: base.weight,
        expansion,
    };
    let tree = expand_solution(instance, &trace, &base.tree)?;
    Ok((tree, trace))
}

fn heaviest_edge(instance: &Instance, tree: &SteinerTree) -> Option<(Edge, f64)> {
    let mut best: Option<(Edge, f64)> = None;
    for e in tree.edges() {
        let w = instance.edge_weight(e);
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((e, w));
        }
    }
    best
}

fn check_contract(
    instance: &Instance,
    tree: &SteinerTree,
    epsilon: f64,
    label: &str,
    budget: EnumerationBudget,
) -> Result<()> {
    let exact = match solve_exact(instance, ExactMethod::Auto, budget) {
        Ok((_, w)) => w,
        Err(Error::BudgetExceeded(_)) => return Ok(()),
        Err(e) => return Err(e),
    };
    let returned = tree_weight(instance, tree)?;
    if returned > (1.0 + epsilon) * exact * (1.0 + 1e-12) {
        return Err(Error::OracleContractViolated {
            label: label.to_string(),
            returned,
            exact,
            epsilon,
        });
    }
    Ok(())
}

/// Maps a tree of the final contracted instance back to the original: the
/// expanded contracted edges are kept first, the expanded base edges fill in
/// as a spanning forest by weight, and dangling Steiner leaves are pruned.
pub fn expand_solution(
    original: &Instance,
    trace: &ContractionTrace,
    base_tree: &SteinerTree,
) -> Result<SteinerTree> {
    let n = original.vertex_count();
    let mut uf = UnionFind::<usize>::new(n);
    let mut kept = Vec::new();
    let mut add = |e: Edge, uf: &mut UnionFind<usize>| -> Result<()> {
        if !original.contains(e.hi()) {
            return Err(Error::InconsistentTrace(format!(
                "edge {e} outside the instance"
            )));
        }
        if uf.union(e.lo().0, e.hi().0) {
            kept.push(e);
        }
        Ok(())
    };
    for step in &trace.steps {
        for &e in &step.original {
            add(e, &mut uf)?;
        }
    }
    let mut rest = Vec::new();
    for e in base_tree.edges() {
        let path = trace
            .expansion
            .get(&e)
            .ok_or_else(|| Error::InconsistentTrace(format!("base edge {e} has no expansion")))?;
        rest.extend(path.iter().copied());
    }
    rest.sort_by(|a, b| {
        original
            .edge_weight(*a)
            .total_cmp(&original.edge_weight(*b))
            .then(a.cmp(b))
    });
    for e in rest {
        add(e, &mut uf)?;
    }
    let mask = is_terminal_mask(original);
    let tree = prune_leaves(&SteinerTree::from_edges(kept), |v| mask[v.0]);
    tree.check(original)
        .map_err(|e| Error::InconsistentTrace(e.to_string()))?;
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Instance {
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

    #[test]
    fn contract_triangle() {
        let (c, map) = contract_edge(&triangle(), Edge::new(0, 1)).unwrap();
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.weight(VertexId(0), VertexId(1)), 2.0);
        assert_eq!(map.old_to_new, vec![VertexId(0), VertexId(0), VertexId(1)]);
        assert_eq!(map.expansion[&Edge::new(0, 1)], vec![Edge::new(1, 2)]);
        assert_eq!(c.terminals().len(), 2);
    }

    #[test]
    fn contract_to_single_vertex() {
        let pair = Instance::complete(
            vec![vec![0.0, 3.0], vec![3.0, 0.0]],
            &[VertexId(0), VertexId(1)],
        )
        .unwrap();
        let (c, _) = contract_edge(&pair, Edge::new(0, 1)).unwrap();
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(c.terminals().len(), 1);
    }

    #[test]
    fn contraction_recloses() {
        // Merging 0 and 1 puts 2 and 3 at distance 1 + 1 through the merged
        // vertex, shorter than their direct 5.9.
        let inst = Instance::complete(
            vec![
                vec![0.0, 5.0, 1.0, 5.5],
                vec![5.0, 0.0, 5.5, 1.0],
                vec![1.0, 5.5, 0.0, 5.9],
                vec![5.5, 1.0, 5.9, 0.0],
            ],
            &[VertexId(2), VertexId(3)],
        )
        .unwrap();
        let (c, map) = contract_edge(&inst, Edge::new(0, 1)).unwrap();
        assert_eq!(c.weight(VertexId(1), VertexId(2)), 2.0);
        assert_eq!(
            map.expansion[&Edge::new(1, 2)],
            vec![Edge::new(0, 2), Edge::new(1, 3)]
        );
        assert!(c.is_metric());
    }

    #[test]
    fn empty_trace_expands_to_base() {
        let inst = triangle();
        let base = SteinerTree::from_edges([Edge::new(0, 1), Edge::new(1, 2)]);
        let trace = ContractionTrace {
            steps: vec![],
            base_tree: base.clone(),
            base_weight: 3.0,
            expansion: inst.edges().map(|e| (e, vec![e])).collect(),
        };
        assert_eq!(expand_solution(&inst, &trace, &base).unwrap(), base);
        let bogus = SteinerTree::from_edges([Edge::new(0, 7)]);
        assert!(matches!(
            expand_solution(&inst, &trace, &bogus),
            Err(Error::InconsistentTrace(_))
        ));
    }

    #[test]
    fn exact_oracle_reproduces_optimum() {
        let pts: Vec<Vec<f64>> = vec![
            vec![0.0, 0.0],
            vec![4.0, 0.1],
            vec![8.3, 0.0],
            vec![4.2, 5.0],
            vec![0.5, 7.5],
            vec![9.0, 7.9],
            vec![4.0, 2.0],
        ];
        let inst =
            crate::model::euclidean_instance(&pts, &[true, true, true, true, true, true, false])
                .unwrap();
        let (tree, trace) = contract_solve(
            &inst,
            1.2,
            &ExactOracle::default(),
            ContractConfig::default(),
        )
        .unwrap();
        let exact = brute_force_opt(&inst, EnumerationBudget::default()).unwrap();
        assert_eq!(tree, exact.tree);
        assert_eq!(trace.steps.len(), 3);
        let w = tree_weight(&inst, &tree).unwrap();
        assert!((w - trace.reported_weight()).abs() < 1e-9);
        for step in &trace.steps {
            assert!(step.original.iter().all(|e| tree.contains(*e)));
        }
    }
}
