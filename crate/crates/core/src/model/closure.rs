use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};

use super::{Instance, VertexId, Weights};
use crate::error::{Error, Result};

/// Completes a sparse weighted graph into the metric of its shortest-path
/// distances. Parallel edges keep the lighter weight.
pub fn metric_closure(
    vertex_count: usize,
    terminals: &[VertexId],
    edges: &[(VertexId, VertexId, f64)],
) -> Result<Instance> {
    let mut graph = UnGraph::<(), f64>::with_capacity(vertex_count, edges.len());
    for _ in 0..vertex_count {
        graph.add_node(());
    }
    for &(u, v, w) in edges {
        if u.0 >= vertex_count || v.0 >= vertex_count {
            return Err(Error::UnknownEdge(u, v));
        }
        if u == v {
            return Err(Error::InvalidParameter(format!("self-loop at {u}")));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::NonPositiveWeight(u, v, w));
        }
        graph.add_edge(NodeIndex::new(u.0), NodeIndex::new(v.0), w);
    }

    let mut weights = Weights::filled(vertex_count, f64::INFINITY);
    for u in 0..vertex_count {
        let dist = dijkstra(&graph, NodeIndex::new(u), None, |e| *e.weight());
        for v in u + 1..vertex_count {
            match dist.get(&NodeIndex::new(v)) {
                Some(&d) => weights.set(u, v, d),
                None => return Err(Error::DisconnectedGraph(VertexId(u), VertexId(v))),
            }
        }
    }

    tighten(&mut weights);

    let mut is_terminal = vec![false; vertex_count];
    for &t in terminals {
        if t.0 >= vertex_count {
            return Err(Error::InvalidParameter(format!(
                "terminal {t} outside 0..{vertex_count}"
            )));
        }
        is_terminal[t.0] = true;
    }
    let count = is_terminal.iter().filter(|&&t| t).count();
    if count < 2 {
        return Err(Error::TooFewTerminals(count));
    }
    Ok(Instance::assemble(weights, is_terminal, None, true, false))
}

/// Relaxes two-hop shortcuts until none remains. Path sums rounded in a
/// different order can undercut a Dijkstra distance by an ulp; at the
/// fixpoint every longer path sum is at least the direct weight, since
/// float addition is monotone, which makes the closure exactly idempotent.
fn tighten(w: &mut Weights) {
    let n = w.len();
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    let via = w.get(i, k) + w.get(k, j);
                    if via < w.get(i, j) {
                        w.set(i, j, via);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}
