//! Instances, trees and the arithmetic shared by every other module.
//!
//! Vertices are dense indices `0..n`. Instances are complete: every unordered
//! pair carries a strictly positive weight, either given directly or obtained
//! through [`metric_closure`]. Nothing here mutates after construction, so all
//! types are `Send + Sync` and can be shared freely across sweeps.

mod closure;
mod instance;
mod tree;

use std::fmt;

pub use closure::metric_closure;
pub use instance::{
    euclidean_instance, validate, Instance, InstanceParts, ValidationReport, ValidationViolation,
};
pub(crate) use tree::prune_leaves;
pub use tree::{canonicalize, tree_weight, SteinerTree};

/// Relative tolerance for metric and Euclidean consistency checks.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Dense vertex index, stable for the lifetime of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VertexId {
    fn from(index: usize) -> Self {
        VertexId(index)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unordered vertex pair stored with the smaller index first.
///
/// The derived ordering (lexicographic on the normalized pair) is the
/// canonical edge order used for every deterministic tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    /// # Panics
    /// Panics on a self-loop.
    pub fn new(a: impl Into<VertexId>, b: impl Into<VertexId>) -> Self {
        let (a, b) = (a.into(), b.into());
        assert_ne!(a, b, "self-loop edge ({a}, {b})");
        if a < b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn lo(self) -> VertexId {
        self.lo
    }

    pub fn hi(self) -> VertexId {
        self.hi
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    pub fn touches(self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint opposite `v`, if `v` is an endpoint.
    pub fn other(self, v: VertexId) -> Option<VertexId> {
        if self.lo == v {
            Some(self.hi)
        } else if self.hi == v {
            Some(self.lo)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// Dense symmetric weight matrix. Entries may be `+inf` for forbidden pairs
/// inside the solvers; public instances always hold finite positive values.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Weights {
    n: usize,
    data: Vec<f64>,
}

impl Weights {
    pub(crate) fn filled(n: usize, value: f64) -> Self {
        let mut data = vec![value; n * n];
        for i in 0..n {
            data[i * n + i] = 0.0;
        }
        Weights { n, data }
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }

    #[inline]
    pub(crate) fn edge(&self, e: Edge) -> f64 {
        self.get(e.lo.0, e.hi.0)
    }

    pub(crate) fn set(&mut self, u: usize, v: usize, w: f64) {
        self.data[u * self.n + v] = w;
        self.data[v * self.n + u] = w;
    }

    /// Sum over a set of edges in canonical order.
    pub(crate) fn sum<'a>(&self, edges: impl IntoIterator<Item = &'a Edge>) -> f64 {
        edges.into_iter().map(|&e| self.edge(e)).sum()
    }
}

pub(crate) fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
