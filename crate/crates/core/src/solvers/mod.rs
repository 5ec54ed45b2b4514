//! Solvers that exploit stability: the terminal spanning tree, greedy fan
//! growth, and approximate-then-contract.

mod contraction;

pub use contraction::{
    contract_edge, contract_solve, expand_solution, ContractConfig, Contraction, ContractionStep,
    ContractionTrace, ExactOracle, FuzzedExactOracle, InnerOracle, MstOracle,
};

use crate::error::{Error, Result};
use crate::model::{canonicalize, Edge, Instance, SteinerTree};
use crate::mst::kruskal;
use crate::structure::{terminal_component_fans, terminal_components, FAN_GAMMA};

/// Minimum spanning tree over the terminals alone, ties broken by canonical
/// edge order. Optimal for Euclidean instances that are stable beyond
/// [`no_steiner_threshold`](crate::structure::no_steiner_threshold).
pub fn mst_terminals(instance: &Instance) -> SteinerTree {
    let ts = instance.terminals();
    let pairs = ts
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| ts[i + 1..].iter().map(move |&b| Edge::new(a, b)));
    SteinerTree::from_edges(kruskal(&instance.weights, pairs))
}

/// Greedy forest growth for stable instances whose optimum has no two
/// adjacent Steiner vertices.
///
/// Each round compares the lightest edge joining two terminal components
/// between terminals with the lightest-average terminal component fan whose
/// edges lie within a factor `1/(γ−1)` of each other, and commits the fan
/// when its average is strictly smaller. Fan enumeration is exponential in
/// the component count, so this is a desk-scale tool.
pub fn fan_greedy(instance: &Instance, gamma: f64) -> Result<SteinerTree> {
    if gamma <= FAN_GAMMA {
        return Err(Error::InvalidParameter(format!(
            "fan growth needs gamma > {FAN_GAMMA}, got {gamma}"
        )));
    }
    let mut h = SteinerTree::new();
    loop {
        let comps = terminal_components(instance, &h);
        let live = instance
            .terminals()
            .iter()
            .filter_map(|&t| comps.component_of(t))
            .collect::<std::collections::BTreeSet<_>>();
        if live.len() <= 1 {
            break;
        }
        let edge = comps.min_crossing_edge(instance, |v| instance.is_terminal(v));
        let fan = terminal_component_fans(instance, &comps)
            .into_iter()
            .filter(|f| f.within_factor(gamma))
            .min_by(|a, b| a.average().total_cmp(&b.average()));
        match (fan, edge) {
            (Some(f), Some((_, w))) if f.average() < w => f.edges().for_each(|e| {
                h.insert(e);
            }),
            (Some(f), None) => f.edges().for_each(|e| {
                h.insert(e);
            }),
            (_, Some((e, _))) => {
                h.insert(e);
            }
            (None, None) => return Err(Error::NoFeasibleStep),
        }
    }
    Ok(canonicalize(instance, &h))
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::exact::{brute_force_opt, EnumerationBudget};
    use crate::model::VertexId;

    fn star(spokes: usize) -> Instance {
        let n = spokes + 1;
        let mut w = vec![vec![2.0; n]; n];
        for (i, row) in w.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for i in 0..spokes {
            w[i][spokes] = 1.0;
            w[spokes][i] = 1.0;
        }
        let terminals: Vec<VertexId> = (0..spokes).map(VertexId).collect();
        Instance::complete(w, &terminals).unwrap()
    }

    #[test]
    fn terminal_mst() {
        let tri = Instance::complete(
            vec![
                vec![0.0, 1.0, 2.9],
                vec![1.0, 0.0, 2.0],
                vec![2.9, 2.0, 0.0],
            ],
            &[VertexId(0), VertexId(1), VertexId(2)],
        )
        .unwrap();
        assert_eq!(
            mst_terminals(&tri),
            SteinerTree::from_edges([Edge::new(0, 1), Edge::new(1, 2)])
        );
        let pair = Instance::complete(
            vec![vec![0.0, 5.0], vec![5.0, 0.0]],
            &[VertexId(0), VertexId(1)],
        )
        .unwrap();
        assert_eq!(mst_terminals(&pair).len(), 1);
    }

    #[test]
    fn fan_greedy_finds_the_star() {
        let inst = star(11);
        let out = fan_greedy(&inst, 1.8).unwrap();
        let exact = brute_force_opt(&inst, EnumerationBudget::default()).unwrap();
        assert_eq!(out, exact.tree);
        assert!(fan_greedy(&inst, 1.7).is_err());
    }

    #[test]
    fn fan_greedy_without_useful_steiner_is_mst() {
        let tri = Instance::complete(
            vec![
                vec![0.0, 1.0, 2.9, 5.0],
                vec![1.0, 0.0, 2.0, 5.0],
                vec![2.9, 2.0, 0.0, 5.0],
                vec![5.0, 5.0, 5.0, 0.0],
            ],
            &[VertexId(0), VertexId(1), VertexId(2)],
        )
        .unwrap();
        assert_eq!(fan_greedy(&tri, 1.8).unwrap(), mst_terminals(&tri));
    }
}
