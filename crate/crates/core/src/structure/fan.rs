use petgraph::unionfind::UnionFind;

use crate::model::{Edge, Instance, SteinerTree, VertexId};

/// The terminal components of a partial forest `H`: every component of `H`
/// with at least one edge, plus every terminal not touched by `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalComponents {
    component_of: Vec<Option<usize>>,
    members: Vec<Vec<VertexId>>,
}

impl TerminalComponents {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn component_of(&self, v: VertexId) -> Option<usize> {
        self.component_of[v.0]
    }

    pub fn members(&self, c: usize) -> &[VertexId] {
        &self.members[c]
    }

    /// Lightest pair joining two distinct components whose endpoints both
    /// pass `keep`, or `None` when fewer than two components exist.
    pub fn min_crossing_edge(
        &self,
        instance: &Instance,
        keep: impl Fn(VertexId) -> bool,
    ) -> Option<(Edge, f64)> {
        let mut best: Option<(Edge, f64)> = None;
        for e in instance.edges() {
            let (Some(a), Some(b)) = (self.component_of(e.lo()), self.component_of(e.hi())) else {
                continue;
            };
            if a == b || !keep(e.lo()) || !keep(e.hi()) {
                continue;
            }
            let w = instance.edge_weight(e);
            if best.is_none_or(|(_, bw)| w < bw) {
                best = Some((e, w));
            }
        }
        best
    }

    pub fn min_crossing_weight(
        &self,
        instance: &Instance,
        keep: impl Fn(VertexId) -> bool,
    ) -> Option<f64> {
        self.min_crossing_edge(instance, keep).map(|(_, w)| w)
    }
}

pub fn terminal_components(instance: &Instance, h: &SteinerTree) -> TerminalComponents {
    let n = instance.vertex_count();
    let mut uf = UnionFind::<usize>::new(n);
    for e in h.edges() {
        uf.union(e.lo().0, e.hi().0);
    }
    let touched = h.vertices();
    let mut root_to_comp = vec![usize::MAX; n];
    let mut component_of = vec![None; n];
    let mut members: Vec<Vec<VertexId>> = Vec::new();
    for v in instance.vertices() {
        if !touched.contains(&v) && !instance.is_terminal(v) {
            continue;
        }
        let root = uf.find(v.0);
        if root_to_comp[root] == usize::MAX {
            root_to_comp[root] = members.len();
            members.push(Vec::new());
        }
        component_of[v.0] = Some(root_to_comp[root]);
        members[root_to_comp[root]].push(v);
    }
    TerminalComponents {
        component_of,
        members,
    }
}

/// A star from a Steiner vertex to one vertex in each of several distinct
/// terminal components.
#[derive(Debug, Clone, PartialEq)]
pub struct Fan {
    pub center: VertexId,
    pub leaves: Vec<VertexId>,
    pub sum: f64,
    /// Number of component merges the fan performs: the leaf count when the
    /// centre already lies in a component, one less otherwise.
    pub merges: usize,
    pub min_edge: f64,
    pub max_edge: f64,
}

impl Fan {
    /// Total weight per component merge. This is the quantity the exchange
    /// argument compares against the optimum edges a fan displaces.
    pub fn average(&self) -> f64 {
        self.sum / self.merges as f64
    }

    /// Total weight per edge.
    pub fn edge_average(&self) -> f64 {
        self.sum / self.leaves.len() as f64
    }

    /// Whether all edges lie within a factor `1/(γ−1)` of each other.
    pub fn within_factor(&self, gamma: f64) -> bool {
        (gamma - 1.0) * self.max_edge < self.min_edge
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.leaves.iter().map(|&b| Edge::new(self.center, b))
    }
}

/// Every terminal component fan, in order of centre, then leaf choices.
/// Exponential in the number of components; meant for desk-scale instances.
pub fn terminal_component_fans(instance: &Instance, comps: &TerminalComponents) -> Vec<Fan> {
    let mut fans = Vec::new();
    for a in instance.vertices().filter(|&v| !instance.is_terminal(v)) {
        let own = comps.component_of(a);
        let others: Vec<usize> = (0..comps.len()).filter(|&c| Some(c) != own).collect();
        let min_leaves = if own.is_some() { 1 } else { 2 };
        let mut chosen = Vec::new();
        extend_fans(
            instance,
            comps,
            a,
            &others,
            0,
            &mut chosen,
            min_leaves,
            own.is_some(),
            &mut fans,
        );
    }
    fans
}

#[allow(clippy::too_many_arguments)]
fn extend_fans(
    instance: &Instance,
    comps: &TerminalComponents,
    center: VertexId,
    others: &[usize],
    next: usize,
    chosen: &mut Vec<VertexId>,
    min_leaves: usize,
    center_inside: bool,
    out: &mut Vec<Fan>,
) {
    if next == others.len() {
        if chosen.len() >= min_leaves {
            let weights: Vec<f64> = chosen.iter().map(|&b| instance.weight(center, b)).collect();
            out.push(Fan {
                center,
                leaves: chosen.clone(),
                sum: weights.iter().sum(),
                merges: if center_inside {
                    chosen.len()
                } else {
                    chosen.len() - 1
                },
                min_edge: weights.iter().copied().fold(f64::INFINITY, f64::min),
                max_edge: weights.iter().copied().fold(0.0, f64::max),
            });
        }
        return;
    }
    extend_fans(
        instance,
        comps,
        center,
        others,
        next + 1,
        chosen,
        min_leaves,
        center_inside,
        out,
    );
    for &b in comps.members(others[next]) {
        chosen.push(b);
        extend_fans(
            instance,
            comps,
            center,
            others,
            next + 1,
            chosen,
            min_leaves,
            center_inside,
            out,
        );
        chosen.pop();
    }
}
