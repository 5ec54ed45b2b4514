use super::budget::{for_each_combination, Tracker};
use crate::error::Result;
use crate::model::{prune_leaves, SteinerTree, VertexId, Weights};
use crate::mst::prim;

/// Exhaustive search over Steiner subsets.
///
/// A minimum canonical tree on vertex set `T ∪ X` is a minimum spanning tree
/// of that set, so the optimum is the lightest pruned MST over all subsets
/// `X` of at most `max_subset` candidates. Exact ties go to the smaller tree
/// in canonical edge-set order. Works for any symmetric weights, including
/// `+inf` for forbidden pairs; returns `None` if no subset is connected.
pub(crate) fn subset_mst_opt(
    w: &Weights,
    is_terminal: &[bool],
    max_subset: usize,
    tracker: &mut Tracker,
) -> Result<Option<(SteinerTree, f64)>> {
    let terminals: Vec<VertexId> = (0..w.len())
        .filter(|&i| is_terminal[i])
        .map(VertexId)
        .collect();
    if terminals.len() < 2 {
        return Ok(Some((SteinerTree::new(), 0.0)));
    }
    let steiner: Vec<VertexId> = (0..w.len())
        .filter(|&i| !is_terminal[i])
        .map(VertexId)
        .collect();

    let mut best: Option<(SteinerTree, f64)> = None;
    let mut vertices = Vec::with_capacity(w.len());
    for size in 0..=max_subset.min(steiner.len()) {
        for_each_combination(steiner.len(), size, |subset| {
            tracker.tick()?;
            vertices.clear();
            vertices.extend_from_slice(&terminals);
            vertices.extend(subset.iter().map(|&i| steiner[i]));
            let Some((edges, total)) = prim(w, &vertices) else {
                return Ok(());
            };
            if let Some((_, best_w)) = &best {
                if total > *best_w * (1.0 + 1e-12) {
                    return Ok(());
                }
            }
            let tree = prune_leaves(&SteinerTree::from_edges(edges), |v| is_terminal[v.0]);
            let weight = w.sum(tree.edge_set());
            let better = match &best {
                None => true,
                Some((bt, bw)) => weight < *bw || (weight == *bw && tree < *bt),
            };
            if better {
                best = Some((tree, weight));
            }
            Ok(())
        })?;
    }
    Ok(best)
}
