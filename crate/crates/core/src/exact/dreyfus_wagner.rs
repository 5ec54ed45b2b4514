use super::budget::Tracker;
use crate::error::{Error, Result};
use crate::model::{prune_leaves, Edge, Instance, SteinerTree, VertexId, Weights};
use crate::mst::kruskal;

/// Settings for the Dreyfus–Wagner solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DwConfig {
    pub max_terminals: usize,
}

impl Default for DwConfig {
    fn default() -> Self {
        DwConfig { max_terminals: 16 }
    }
}

/// Exact minimum Steiner tree by dynamic programming over terminal subsets.
pub fn dreyfus_wagner(instance: &Instance) -> Result<(SteinerTree, f64)> {
    dreyfus_wagner_with(instance, DwConfig::default())
}

pub fn dreyfus_wagner_with(instance: &Instance, config: DwConfig) -> Result<(SteinerTree, f64)> {
    let is_terminal: Vec<bool> = instance
        .vertices()
        .map(|v| instance.is_terminal(v))
        .collect();
    let (tree, _) = dw_solve(
        &instance.weights,
        &is_terminal,
        config,
        &mut Tracker::unlimited(),
    )?
    .ok_or_else(|| Error::InvalidTree("terminals are not connected".into()))?;
    let weight = instance.weights.sum(tree.edge_set());
    Ok((tree, weight))
}

/// All-pairs shortest paths with next-hop recovery. Handles `+inf` entries.
struct ShortestPaths {
    n: usize,
    dist: Vec<f64>,
    next: Vec<usize>,
}

impl ShortestPaths {
    fn new(w: &Weights) -> Self {
        let n = w.len();
        let mut dist = vec![f64::INFINITY; n * n];
        let mut next = vec![usize::MAX; n * n];
        for u in 0..n {
            for v in 0..n {
                dist[u * n + v] = w.get(u, v);
                if w.get(u, v).is_finite() {
                    next[u * n + v] = v;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let via = dik + dist[k * n + j];
                    if via < dist[i * n + j] {
                        dist[i * n + j] = via;
                        next[i * n + j] = next[i * n + k];
                    }
                }
            }
        }
        ShortestPaths { n, dist, next }
    }

    #[inline]
    fn d(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    fn push_path(&self, mut u: usize, v: usize, out: &mut Vec<Edge>) {
        while u != v {
            let step = self.next[u * self.n + v];
            out.push(Edge::new(u, step));
            u = step;
        }
    }
}

/// Dreyfus–Wagner over arbitrary symmetric weights. The table is keyed by
/// (subset of all terminals but the root, junction vertex).
pub(crate) fn dw_solve(
    w: &Weights,
    is_terminal: &[bool],
    config: DwConfig,
    tracker: &mut Tracker,
) -> Result<Option<(SteinerTree, f64)>> {
    let n = w.len();
    let terminals: Vec<usize> = (0..n).filter(|&i| is_terminal[i]).collect();
    let k = terminals.len();
    if k > config.max_terminals {
        return Err(Error::TooManyTerminals {
            count: k,
            limit: config.max_terminals,
        });
    }
    if k < 2 {
        return Ok(Some((SteinerTree::new(), 0.0)));
    }
    let sp = ShortestPaths::new(w);
    let root = terminals[k - 1];
    let others = &terminals[..k - 1];
    let full = (1usize << others.len()) - 1;

    let mut dp = vec![f64::INFINITY; (full + 1) * n];
    let mut junction = vec![usize::MAX; (full + 1) * n];
    let mut split = vec![0usize; (full + 1) * n];
    for (i, &t) in others.iter().enumerate() {
        for v in 0..n {
            dp[(1 << i) * n + v] = sp.d(t, v);
        }
    }
    let mut merged = vec![f64::INFINITY; n];
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        tracker.check_deadline()?;
        // merged[u]: best tree for `mask` in which u is an internal junction.
        for u in 0..n {
            let mut best = f64::INFINITY;
            let mut best_split = 0;
            let low = mask & mask.wrapping_neg();
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                // Each unordered split once: the part holding the lowest bit.
                if sub & low != 0 {
                    let c = dp[sub * n + u] + dp[(mask ^ sub) * n + u];
                    if c < best {
                        best = c;
                        best_split = sub;
                    }
                }
                sub = (sub - 1) & mask;
            }
            merged[u] = best;
            split[mask * n + u] = best_split;
        }
        for v in 0..n {
            let mut best = f64::INFINITY;
            let mut arg = usize::MAX;
            for (u, &m) in merged.iter().enumerate() {
                let c = m + sp.d(u, v);
                if c < best {
                    best = c;
                    arg = u;
                }
            }
            dp[mask * n + v] = best;
            junction[mask * n + v] = arg;
        }
    }
    let value = dp[full * n + root];
    if !value.is_finite() {
        return Ok(None);
    }

    let mut edges = Vec::new();
    let mut stack = vec![(full, root)];
    while let Some((mask, v)) = stack.pop() {
        if mask.count_ones() == 1 {
            let i = mask.trailing_zeros() as usize;
            sp.push_path(others[i], v, &mut edges);
            continue;
        }
        let u = junction[mask * n + v];
        sp.push_path(v, u, &mut edges);
        let s = split[mask * n + u];
        stack.push((s, u));
        stack.push((mask ^ s, u));
    }
    // The union of the backtracked paths is a tree unless exact ties produced
    // parallel routes; a spanning forest of the union restores one.
    edges.sort();
    edges.dedup();
    let tree = SteinerTree::from_edges(kruskal(w, edges));
    let tree = prune_leaves(&tree, |v: VertexId| is_terminal[v.0]);
    let weight = w.sum(tree.edge_set());
    Ok(Some((tree, weight)))
}
