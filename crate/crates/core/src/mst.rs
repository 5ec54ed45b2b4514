//! Spanning-tree helpers over subsets of a dense weight matrix.

use petgraph::unionfind::UnionFind;

use crate::model::{Edge, VertexId, Weights};

/// Prim's algorithm on the complete graph induced by `vertices`.
///
/// Returns `None` when an infinite entry leaves the subset disconnected.
/// Ties go to the lowest vertex position, so the result is deterministic.
pub(crate) fn prim(w: &Weights, vertices: &[VertexId]) -> Option<(Vec<Edge>, f64)> {
    let k = vertices.len();
    if k <= 1 {
        return Some((Vec::new(), 0.0));
    }
    let mut in_tree = vec![false; k];
    let mut best = vec![f64::INFINITY; k];
    let mut parent = vec![0usize; k];
    in_tree[0] = true;
    for j in 1..k {
        best[j] = w.get(vertices[0].0, vertices[j].0);
    }
    let mut edges = Vec::with_capacity(k - 1);
    let mut total = 0.0;
    for _ in 1..k {
        let mut pick = usize::MAX;
        let mut pick_w = f64::INFINITY;
        for j in 0..k {
            if !in_tree[j] && best[j] < pick_w {
                pick = j;
                pick_w = best[j];
            }
        }
        if pick == usize::MAX {
            return None;
        }
        in_tree[pick] = true;
        edges.push(Edge::new(vertices[parent[pick]], vertices[pick]));
        total += pick_w;
        for j in 0..k {
            if !in_tree[j] {
                let d = w.get(vertices[pick].0, vertices[j].0);
                if d < best[j] {
                    best[j] = d;
                    parent[j] = pick;
                }
            }
        }
    }
    Some((edges, total))
}

/// Kruskal over the given candidate edges, ordered by (weight, canonical
/// edge order). Returns a spanning forest of the candidates.
pub(crate) fn kruskal(w: &Weights, candidates: impl IntoIterator<Item = Edge>) -> Vec<Edge> {
    let mut sorted: Vec<Edge> = candidates.into_iter().collect();
    sorted.sort_by(|a, b| w.edge(*a).total_cmp(&w.edge(*b)).then(a.cmp(b)));
    let mut uf = UnionFind::<usize>::new(w.len());
    sorted
        .into_iter()
        .filter(|e| uf.union(e.lo().0, e.hi().0))
        .collect()
}
