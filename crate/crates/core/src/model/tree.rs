use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Edge, Instance, VertexId};
use crate::error::{Error, Result};

/// A set of edges meant to form a tree spanning every terminal.
///
/// Ordering compares the sorted edge lists lexicographically; this is the
/// canonical edge-set order used to break ties deterministically.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SteinerTree {
    edges: BTreeSet<Edge>,
}

impl SteinerTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Self {
        SteinerTree {
            edges: edges.into_iter().collect(),
        }
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        a != b && self.edges.contains(&Edge::new(a, b))
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.edges.iter().flat_map(|e| [e.lo(), e.hi()]).collect()
    }

    pub fn degrees(&self) -> BTreeMap<VertexId, usize> {
        let mut deg = BTreeMap::new();
        for e in &self.edges {
            *deg.entry(e.lo()).or_insert(0) += 1;
            *deg.entry(e.hi()).or_insert(0) += 1;
        }
        deg
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.edges.iter().filter_map(|e| e.other(v)).collect()
    }

    /// Edges of `self` that `other` lacks, in canonical order.
    pub fn difference<'a>(&'a self, other: &'a SteinerTree) -> impl Iterator<Item = Edge> + 'a {
        self.edges.difference(&other.edges).copied()
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.edges.insert(e)
    }

    /// Checks the tree invariants against `instance`: edges in range, acyclic,
    /// connected, and touching every terminal.
    pub fn check(&self, instance: &Instance) -> Result<()> {
        for e in &self.edges {
            if !instance.contains(e.hi()) {
                return Err(Error::UnknownEdge(e.lo(), e.hi()));
            }
        }
        let terminals = instance.terminals();
        if self.edges.is_empty() {
            return if terminals.len() <= 1 {
                Ok(())
            } else {
                Err(Error::InvalidTree(
                    "empty tree with several terminals".into(),
                ))
            };
        }
        let vertices = self.vertices();
        if self.edges.len() + 1 != vertices.len() {
            return Err(Error::InvalidTree(format!(
                "{} edges on {} vertices",
                self.edges.len(),
                vertices.len()
            )));
        }
        let mut uf = petgraph::unionfind::UnionFind::<usize>::new(instance.vertex_count());
        for e in &self.edges {
            if !uf.union(e.lo().0, e.hi().0) {
                return Err(Error::InvalidTree(format!("cycle through {e}")));
            }
        }
        if let Some(missing) = terminals.iter().find(|t| !vertices.contains(t)) {
            return Err(Error::InvalidTree(format!(
                "terminal {missing} not spanned"
            )));
        }
        Ok(())
    }

    /// True when every leaf is a terminal.
    pub fn is_canonical(&self, instance: &Instance) -> bool {
        self.degrees()
            .into_iter()
            .all(|(v, d)| d != 1 || instance.is_terminal(v))
    }

    /// Formats edges with 1-based vertex ids, matching the STP numbering.
    pub fn to_one_based_string(&self) -> String {
        self.edges
            .iter()
            .map(|e| format!("{}-{}", e.lo().0 + 1, e.hi().0 + 1))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for SteinerTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Edge> for SteinerTree {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        Self::from_edges(iter)
    }
}

/// Total weight of the tree's edges, summed in canonical order.
pub fn tree_weight(instance: &Instance, tree: &SteinerTree) -> Result<f64> {
    if let Some(e) = tree.edges().find(|e| !instance.contains(e.hi())) {
        return Err(Error::UnknownEdge(e.lo(), e.hi()));
    }
    Ok(instance.weights.sum(tree.edge_set()))
}

/// Repeatedly strips non-terminal leaves until every leaf is a terminal.
pub fn canonicalize(instance: &Instance, tree: &SteinerTree) -> SteinerTree {
    prune_leaves(tree, |v| instance.is_terminal(v))
}

pub(crate) fn prune_leaves(
    tree: &SteinerTree,
    is_terminal: impl Fn(VertexId) -> bool,
) -> SteinerTree {
    let mut edges = tree.edges.clone();
    let mut degree = tree.degrees();
    let mut stack: Vec<VertexId> = degree
        .iter()
        .filter(|(&v, &d)| d == 1 && !is_terminal(v))
        .map(|(&v, _)| v)
        .collect();
    while let Some(leaf) = stack.pop() {
        if degree.get(&leaf) != Some(&1) {
            continue;
        }
        let Some(&e) = edges.iter().find(|e| e.touches(leaf)) else {
            continue;
        };
        edges.remove(&e);
        degree.insert(leaf, 0);
        let other = e.other(leaf).expect("edge touches leaf");
        let d = degree.get_mut(&other).expect("endpoint has a degree");
        *d -= 1;
        if *d == 1 && !is_terminal(other) {
            stack.push(other);
        }
    }
    SteinerTree { edges }
}
