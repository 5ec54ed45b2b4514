use std::fmt;

use super::{euclidean_distance, Edge, VertexId, Weights, CONSISTENCY_TOL};
use crate::error::{Error, Result};

/// A complete Steiner tree instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub(crate) weights: Weights,
    is_terminal: Vec<bool>,
    terminals: Vec<VertexId>,
    coords: Option<Vec<Vec<f64>>>,
    metric: bool,
    euclidean: bool,
}

/// Raw material for an instance whose invariants have not been checked.
///
/// Used for reading foreign data and for exercising [`validate`]; the
/// flags are claims that validation holds the weights to.
#[derive(Debug, Clone, Default)]
pub struct InstanceParts {
    pub weights: Vec<Vec<f64>>,
    pub terminals: Vec<VertexId>,
    pub coords: Option<Vec<Vec<f64>>>,
    pub metric: bool,
    pub euclidean: bool,
}

impl Instance {
    /// Builds a complete instance from a full weight matrix. The metric flag
    /// is set when the triangle inequality holds within tolerance.
    pub fn complete(weights: Vec<Vec<f64>>, terminals: &[VertexId]) -> Result<Self> {
        let mut inst = Instance::from_parts_unchecked(InstanceParts {
            weights,
            terminals: terminals.to_vec(),
            coords: None,
            metric: false,
            euclidean: false,
        })?;
        inst.metric = triangle_violations(&inst.weights, 1).is_empty();
        let report = validate(&inst);
        if report.ok() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(report))
        }
    }

    /// Builds an instance without enforcing anything beyond matching shapes.
    /// Call [`validate`] to audit it.
    pub fn from_parts_unchecked(parts: InstanceParts) -> Result<Self> {
        let n = parts.weights.len();
        let mut weights = Weights::filled(n, 0.0);
        for (u, row) in parts.weights.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "weight row {u} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (v, &w) in row.iter().enumerate() {
                weights.data[u * n + v] = w;
            }
        }
        let mut is_terminal = vec![false; n];
        for &t in &parts.terminals {
            if t.0 >= n {
                return Err(Error::InvalidParameter(format!(
                    "terminal {t} outside 0..{n}"
                )));
            }
            is_terminal[t.0] = true;
        }
        if let Some(coords) = &parts.coords {
            if coords.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "{} coordinate rows for {n} vertices",
                    coords.len()
                )));
            }
        }
        Ok(Self::assemble(
            weights,
            is_terminal,
            parts.coords,
            parts.metric,
            parts.euclidean,
        ))
    }

    pub(crate) fn assemble(
        weights: Weights,
        is_terminal: Vec<bool>,
        coords: Option<Vec<Vec<f64>>>,
        metric: bool,
        euclidean: bool,
    ) -> Self {
        let terminals = is_terminal
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(i, _)| VertexId(i))
            .collect();
        Instance {
            weights,
            is_terminal,
            terminals,
            coords,
            metric,
            euclidean,
        }
    }

    /// Same vertices and terminals, new weights; coordinates are dropped
    /// unless the result is still claimed Euclidean.
    pub(crate) fn with_weights(&self, weights: Weights, metric: bool, euclidean: bool) -> Self {
        let coords = if euclidean { self.coords.clone() } else { None };
        Self::assemble(weights, self.is_terminal.clone(), coords, metric, euclidean)
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    pub fn non_terminals(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| !self.is_terminal(v)).collect()
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.is_terminal.get(v.0).copied().unwrap_or(false)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.vertex_count()
    }

    /// Weight of the unordered pair `{u, v}`.
    ///
    /// # Panics
    /// Panics if either vertex is outside the instance.
    pub fn weight(&self, u: VertexId, v: VertexId) -> f64 {
        self.weights.get(u.0, v.0)
    }

    pub fn edge_weight(&self, e: Edge) -> f64 {
        self.weights.edge(e)
    }

    /// All unordered pairs in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.vertex_count();
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| Edge::new(u, v)))
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    pub fn coord(&self, v: VertexId) -> Option<&[f64]> {
        self.coords.as_ref().map(|c| c[v.0].as_slice())
    }

    pub fn is_metric(&self) -> bool {
        self.metric
    }

    pub fn is_euclidean(&self) -> bool {
        self.euclidean
    }

    /// Copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factor {factor}")));
        }
        let mut weights = self.weights.clone();
        for w in &mut weights.data {
            *w *= factor;
        }
        let coords = self.coords.as_ref().map(|rows| {
            rows.iter()
                .map(|p| p.iter().map(|x| x * factor).collect())
                .collect()
        });
        Ok(Self::assemble(
            weights,
            self.is_terminal.clone(),
            coords,
            self.metric,
            self.euclidean,
        ))
    }
}

/// Builds a Euclidean instance whose weights are pairwise distances.
pub fn euclidean_instance(points: &[Vec<f64>], terminal_flags: &[bool]) -> Result<Instance> {
    let n = points.len();
    if terminal_flags.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} terminal flags for {n} points",
            terminal_flags.len()
        )));
    }
    let dim = points.first().map_or(0, Vec::len);
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidParameter(
            "points must share a positive dimension".into(),
        ));
    }
    let t = terminal_flags.iter().filter(|&&f| f).count();
    if t < 2 {
        return Err(Error::TooFewTerminals(t));
    }
    let mut weights = Weights::filled(n, 0.0);
    for u in 0..n {
        for v in u + 1..n {
            let d = euclidean_distance(&points[u], &points[v]);
            if d == 0.0 {
                return Err(Error::DuplicatePoint(VertexId(u), VertexId(v)));
            }
            weights.set(u, v, d);
        }
    }
    Ok(Instance::assemble(
        weights,
        terminal_flags.to_vec(),
        Some(points.to_vec()),
        true,
        true,
    ))
}

/// One failed invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationViolation {
    pub rule: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<ValidationViolation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, rule: &'static str, detail: String) {
        self.violations.push(ValidationViolation { rule, detail });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "[{}] {}", v.rule, v.detail)?;
        }
        Ok(())
    }
}

/// Audits every instance invariant and lists each offending pair or triple.
pub fn validate(instance: &Instance) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = instance.vertex_count();
    let w = &instance.weights;

    if instance.terminals.len() < 2 {
        report.push(
            "terminal-count",
            format!("{} terminals, need at least 2", instance.terminals.len()),
        );
    }
    for u in 0..n {
        if w.get(u, u) != 0.0 {
            report.push("diagonal", format!("w({u},{u}) = {}", w.get(u, u)));
        }
        for v in u + 1..n {
            let (a, b) = (w.get(u, v), w.get(v, u));
            if a != b {
                report.push(
                    "symmetric",
                    format!("w({u},{v}) = {a} but w({v},{u}) = {b}"),
                );
            }
            if !(a > 0.0 && a.is_finite()) {
                report.push("positive", format!("w({u},{v}) = {a}"));
            }
        }
    }
    if instance.metric && !report.has_rule("positive") {
        for (a, b, c) in triangle_violations(w, usize::MAX) {
            report.push(
                "triangle",
                format!(
                    "w({a},{c}) = {} > w({a},{b}) + w({b},{c}) = {}",
                    w.get(a, c),
                    w.get(a, b) + w.get(b, c)
                ),
            );
        }
    }
    if instance.euclidean {
        match &instance.coords {
            None => report.push("coordinates", "euclidean flag without coordinates".into()),
            Some(coords) => {
                let dim = coords.first().map_or(0, Vec::len);
                if coords.iter().any(|p| p.len() != dim) || dim == 0 {
                    report.push("coordinates", "coordinate rows differ in dimension".into());
                } else {
                    for u in 0..n {
                        for v in u + 1..n {
                            let d = euclidean_distance(&coords[u], &coords[v]);
                            let wuv = w.get(u, v);
                            if (wuv - d).abs() > CONSISTENCY_TOL * wuv.abs() {
                                report.push(
                                    "euclidean",
                                    format!("w({u},{v}) = {wuv} but distance is {d}"),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

/// Triples (a, b, c) with w_ac > (w_ab + w_bc)(1 + tol), up to `limit` hits.
pub(crate) fn triangle_violations(w: &Weights, limit: usize) -> Vec<(usize, usize, usize)> {
    let n = w.len();
    let mut out = Vec::new();
    for a in 0..n {
        for c in a + 1..n {
            let direct = w.get(a, c);
            for b in 0..n {
                if b == a || b == c {
                    continue;
                }
                if direct > (w.get(a, b) + w.get(b, c)) * (1.0 + CONSISTENCY_TOL) {
                    out.push((a, b, c));
                    if out.len() >= limit {
                        return out;
                    }
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    fn triangle(ab: f64, bc: f64, ac: f64) -> Vec<Vec<f64>> {
        vec![vec![0.0, ab, ac], vec![ab, 0.0, bc], vec![ac, bc, 0.0]]
    }

    #[test]
    fn metric_triangle_validates() {
        let inst = Instance::complete(triangle(1.0, 2.0, 2.9), &[v(0), v(1), v(2)]).unwrap();
        assert!(inst.is_metric());
        assert!(validate(&inst).ok());
    }

    #[test]
    fn claimed_metric_triangle_violation_names_the_pair() {
        let inst = Instance::from_parts_unchecked(InstanceParts {
            weights: triangle(1.0, 1.0, 5.0),
            terminals: vec![v(0), v(1), v(2)],
            metric: true,
            ..Default::default()
        })
        .unwrap();
        let report = validate(&inst);
        assert!(!report.ok());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].rule, "triangle");
        assert!(report.violations[0].detail.starts_with("w(0,2)"));
    }

    #[test]
    fn euclidean_weight_mismatch_is_reported() {
        let inst = Instance::from_parts_unchecked(InstanceParts {
            weights: vec![vec![0.0, 5.5], vec![5.5, 0.0]],
            terminals: vec![v(0), v(1)],
            coords: Some(vec![vec![0.0, 0.0], vec![3.0, 4.0]]),
            metric: true,
            euclidean: true,
        })
        .unwrap();
        assert!(validate(&inst).has_rule("euclidean"));
    }

    #[test]
    fn zero_weight_and_asymmetry_are_rejected() {
        let err = Instance::complete(vec![vec![0.0, 0.0], vec![0.0, 0.0]], &[v(0), v(1)]);
        assert!(matches!(err, Err(Error::InvalidInstance(r)) if r.has_rule("positive")));
        let inst = Instance::from_parts_unchecked(InstanceParts {
            weights: vec![vec![0.0, 1.0], vec![2.0, 0.0]],
            terminals: vec![v(0), v(1)],
            ..Default::default()
        })
        .unwrap();
        assert!(validate(&inst).has_rule("symmetric"));
    }

    #[test]
    fn single_terminal_is_reported() {
        let inst = Instance::from_parts_unchecked(InstanceParts {
            weights: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            terminals: vec![v(0)],
            ..Default::default()
        })
        .unwrap();
        assert!(validate(&inst).has_rule("terminal-count"));
    }

    #[test]
    fn euclidean_examples() {
        let inst = euclidean_instance(&[vec![0.0, 0.0], vec![3.0, 4.0]], &[true, true]).unwrap();
        assert_eq!(inst.weight(v(0), v(1)), 5.0);

        let line =
            euclidean_instance(&[vec![0.0], vec![1.0], vec![2.0]], &[true, true, true]).unwrap();
        assert_eq!(
            line.weight(v(0), v(2)),
            line.weight(v(0), v(1)) + line.weight(v(1), v(2))
        );
        assert!(validate(&line).ok());

        let square = euclidean_instance(
            &[
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
            &[true; 4],
        )
        .unwrap();
        assert!((square.weight(v(0), v(2)) - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(square.is_euclidean() && square.is_metric());
    }

    #[test]
    fn euclidean_errors() {
        assert!(matches!(
            euclidean_instance(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[true, true]),
            Err(Error::DuplicatePoint(_, _))
        ));
        assert!(matches!(
            euclidean_instance(&[vec![0.0], vec![1.0]], &[true, false]),
            Err(Error::TooFewTerminals(1))
        ));
    }
}
