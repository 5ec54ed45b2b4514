use std::time::Instant;

use super::budget::{next_combination, EnumerationBudget};
use crate::model::{Edge, Instance, SteinerTree, VertexId};

/// Whether a canonical-tree stream has covered the whole search space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerationStatus {
    Running,
    Exhaustive,
    Truncated(String),
}

/// Stream of every canonical Steiner tree of an instance.
///
/// Steiner subsets `X` are visited by size, then lexicographically; for
/// each vertex set `T ∪ X` the spanning trees are decoded from Prüfer
/// sequences in odometer order, and a tree is emitted only if every vertex
/// of `X` is internal. Each canonical tree has exactly one vertex set, so
/// nothing is produced twice.
pub struct CanonicalTrees<'a> {
    instance: &'a Instance,
    budget: EnumerationBudget,
    start: Instant,
    steiner: Vec<VertexId>,
    max_subset: usize,
    subset: Option<Vec<usize>>,
    vertices: Vec<VertexId>,
    steiner_mask: Vec<bool>,
    prufer: Option<Vec<usize>>,
    emitted: u64,
    steps: u64,
    status: EnumerationStatus,
}

pub fn enumerate_canonical_trees(
    instance: &Instance,
    budget: EnumerationBudget,
) -> CanonicalTrees<'_> {
    let steiner = instance.non_terminals();
    let max_subset = budget.subset_limit(steiner.len());
    let mut trees = CanonicalTrees {
        instance,
        budget,
        start: Instant::now(),
        steiner,
        max_subset,
        subset: Some(Vec::new()),
        vertices: Vec::new(),
        steiner_mask: Vec::new(),
        prufer: None,
        emitted: 0,
        steps: 0,
        status: EnumerationStatus::Running,
    };
    trees.load_subset();
    trees
}

impl CanonicalTrees<'_> {
    pub fn status(&self) -> &EnumerationStatus {
        &self.status
    }

    pub fn is_exhaustive(&self) -> bool {
        self.status == EnumerationStatus::Exhaustive
    }

    fn load_subset(&mut self) {
        let Some(subset) = &self.subset else {
            return;
        };
        let mut vertices: Vec<VertexId> = self.instance.terminals().to_vec();
        vertices.extend(subset.iter().map(|&i| self.steiner[i]));
        vertices.sort();
        self.steiner_mask = vertices
            .iter()
            .map(|&v| !self.instance.is_terminal(v))
            .collect();
        let len = vertices.len().saturating_sub(2);
        self.vertices = vertices;
        self.prufer = Some(vec![0; len]);
    }

    fn advance_subset(&mut self) {
        let Some(subset) = self.subset.as_mut() else {
            return;
        };
        let k = self.steiner.len();
        if !next_combination(subset, k) {
            let next = subset.len() + 1;
            if next > self.max_subset {
                self.subset = None;
                self.prufer = None;
                self.status = if self.max_subset >= k {
                    EnumerationStatus::Exhaustive
                } else {
                    EnumerationStatus::Truncated(format!(
                        "Steiner subsets limited to size {}",
                        self.max_subset
                    ))
                };
                return;
            }
            *subset = (0..next).collect();
        }
        self.load_subset();
    }

    /// Decodes the current sequence if it keeps every Steiner vertex internal.
    fn decode_current(&self) -> Option<SteinerTree> {
        let seq = self.prufer.as_ref()?;
        let k = self.vertices.len();
        if k < 2 {
            return Some(SteinerTree::new());
        }
        let mut degree = vec![1usize; k];
        for &s in seq {
            degree[s] += 1;
        }
        if (0..k).any(|i| self.steiner_mask[i] && degree[i] == 1) {
            return None;
        }
        let mut edges = Vec::with_capacity(k - 1);
        for &s in seq {
            let leaf = (0..k)
                .find(|&i| degree[i] == 1)
                .expect("a leaf always exists");
            edges.push(Edge::new(self.vertices[leaf], self.vertices[s]));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&i| degree[i] == 1).collect();
        edges.push(Edge::new(self.vertices[rest[0]], self.vertices[rest[1]]));
        Some(SteinerTree::from_edges(edges))
    }

    /// Moves the odometer; returns false when this vertex set is done.
    fn advance_prufer(&mut self) -> bool {
        let k = self.vertices.len();
        let Some(seq) = self.prufer.as_mut() else {
            return false;
        };
        for digit in seq.iter_mut().rev() {
            if *digit + 1 < k {
                *digit += 1;
                return true;
            }
            *digit = 0;
        }
        false
    }
}

impl Iterator for CanonicalTrees<'_> {
    type Item = SteinerTree;

    fn next(&mut self) -> Option<SteinerTree> {
        loop {
            if self.status != EnumerationStatus::Running || self.prufer.is_none() {
                return None;
            }
            self.steps += 1;
            if self.steps.is_multiple_of(1024) {
                if let Some(limit) = self.budget.deadline {
                    if self.start.elapsed() > limit {
                        self.status = EnumerationStatus::Truncated(format!(
                            "deadline of {:.3}s reached",
                            limit.as_secs_f64()
                        ));
                        return None;
                    }
                }
            }
            let tree = self.decode_current();
            if !self.advance_prufer() {
                self.advance_subset();
            }
            if let Some(tree) = tree {
                if self.budget.max_trees.is_some_and(|m| self.emitted >= m) {
                    self.status =
                        EnumerationStatus::Truncated(format!("more than {} trees", self.emitted));
                    return None;
                }
                self.emitted += 1;
                return Some(tree);
            }
        }
    }
}
