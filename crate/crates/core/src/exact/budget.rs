use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Limits on exhaustive search. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnumerationBudget {
    /// Largest number of Steiner candidates a tree may use.
    pub max_steiner_subset_size: Option<usize>,
    /// Largest number of candidate trees to examine.
    pub max_trees: Option<u64>,
    pub deadline: Option<Duration>,
}

impl EnumerationBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_deadline(mut self, deadline: Duration) -> Self {
        self.deadline = Some(deadline);
        self
    }

    pub fn with_max_trees(mut self, max_trees: u64) -> Self {
        self.max_trees = Some(max_trees);
        self
    }

    pub fn with_max_steiner_subset_size(mut self, size: usize) -> Self {
        self.max_steiner_subset_size = Some(size);
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.max_trees == Some(0) {
            return Err(Error::InvalidParameter("max_trees must be positive".into()));
        }
        if self.deadline.is_some_and(|d| d.is_zero()) {
            return Err(Error::InvalidParameter("deadline must be positive".into()));
        }
        Ok(())
    }

    /// Whether a search over `steiner_count` candidates can be exhaustive.
    pub(crate) fn covers(&self, steiner_count: usize) -> bool {
        self.max_steiner_subset_size
            .is_none_or(|k| k >= steiner_count)
    }

    pub(crate) fn subset_limit(&self, steiner_count: usize) -> usize {
        self.max_steiner_subset_size
            .map_or(steiner_count, |k| k.min(steiner_count))
    }

    pub(crate) fn tracker(&self) -> Tracker {
        Tracker {
            start: Instant::now(),
            deadline: self.deadline,
            max_trees: self.max_trees,
            count: 0,
        }
    }
}

/// Counts work against a budget.
#[derive(Debug)]
pub(crate) struct Tracker {
    start: Instant,
    deadline: Option<Duration>,
    max_trees: Option<u64>,
    count: u64,
}

impl Tracker {
    pub(crate) fn unlimited() -> Self {
        EnumerationBudget::unlimited().tracker()
    }

    /// Records one candidate tree.
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.count += 1;
        if let Some(max) = self.max_trees {
            if self.count > max {
                return Err(Error::BudgetExceeded(format!(
                    "more than {max} candidate trees"
                )));
            }
        }
        if self.count.is_multiple_of(256) {
            self.check_deadline()?;
        }
        Ok(())
    }

    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(limit) if self.start.elapsed() > limit => Err(Error::deadline(limit)),
            _ => Ok(()),
        }
    }
}

/// Visits the `size`-subsets of `0..k` in lexicographic order.
pub(crate) fn for_each_combination(
    k: usize,
    size: usize,
    mut visit: impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if size > k {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        visit(&idx)?;
        if !next_combination(&mut idx, k) {
            return Ok(());
        }
    }
}

pub(crate) fn next_combination(idx: &mut [usize], k: usize) -> bool {
    let size = idx.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if idx[i] < k - size + i {
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| {
            seen.push(c.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut empty = 0;
        for_each_combination(3, 0, |c| {
            assert!(c.is_empty());
            empty += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(empty, 1);
    }

    #[test]
    fn tracker_enforces_tree_cap() {
        let mut t = EnumerationBudget::default().with_max_trees(2).tracker();
        assert!(t.tick().is_ok());
        assert!(t.tick().is_ok());
        assert!(matches!(t.tick(), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn zero_bounds_rejected() {
        assert!(EnumerationBudget::default()
            .with_max_trees(0)
            .check()
            .is_err());
        assert!(EnumerationBudget::default()
            .with_deadline(Duration::ZERO)
            .check()
            .is_err());
    }
}
