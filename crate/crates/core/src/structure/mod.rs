//! Executable forms of the structural lemmas obeyed by optimal trees of
//! γ-stable instances.
//!
//! Each checker takes an instance, its exact optimum and a γ, and reports
//! every place where the lemma's conclusion fails. On an instance that is
//! genuinely γ-stable (and whose optimum is exact) every applicable checker
//! must come back empty; on unstable inputs violations are expected and show
//! which inequality broke.
//!
//! Inequalities are evaluated with plain floating comparisons, no epsilon.
//! Every violation carries `lhs`, `rhs` and `slack = rhs − lhs` for the
//! inequality `lhs < rhs` that the lemma asserts (or, for membership
//! lemmas, for the inequality that triggered the membership requirement).

mod fan;
mod geometry;

use std::fmt;

pub use fan::{terminal_component_fans, terminal_components, Fan, TerminalComponents};
pub use geometry::{
    angle_at, angle_threshold, max_packing_count, no_steiner_threshold, steiner_degree_lower_bound,
    steiner_degree_upper_bound, steiner_ratio,
};

use crate::error::{Error, Result};
use crate::model::{Edge, Instance, SteinerTree, VertexId};

/// The golden ratio, the threshold above which the far lemma applies.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// Lower γ bound for the fan lemma.
pub const FAN_GAMMA: f64 = 1.755;

/// Identifies a structural lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LemmaId {
    SteinerDegreeLower,
    NearestNeighbor,
    AdjacentEdges,
    Close,
    Far,
    CloseIff,
    Fan,
    AngleLower,
    SteinerDegreeUpper,
}

impl LemmaId {
    pub const ALL: [LemmaId; 9] = [
        LemmaId::SteinerDegreeLower,
        LemmaId::NearestNeighbor,
        LemmaId::AdjacentEdges,
        LemmaId::Close,
        LemmaId::Far,
        LemmaId::CloseIff,
        LemmaId::Fan,
        LemmaId::AngleLower,
        LemmaId::SteinerDegreeUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::SteinerDegreeLower => "degree-lower",
            LemmaId::NearestNeighbor => "nearest-neighbor",
            LemmaId::AdjacentEdges => "adjacent-edges",
            LemmaId::Close => "close",
            LemmaId::Far => "far",
            LemmaId::CloseIff => "close-iff",
            LemmaId::Fan => "fan",
            LemmaId::AngleLower => "angle",
            LemmaId::SteinerDegreeUpper => "degree-upper",
        }
    }

    pub fn from_name(name: &str) -> Option<LemmaId> {
        LemmaId::ALL.into_iter().find(|l| l.name() == name)
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failed inequality or membership requirement.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Vertices involved, in the order the lemma names them.
    pub tuple: Vec<VertexId>,
    /// Which part of a multi-part lemma failed; 0 for single-part lemmas.
    pub clause: u8,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub detail: String,
}

impl Violation {
    fn new(tuple: Vec<VertexId>, clause: u8, lhs: f64, rhs: f64) -> Self {
        Violation {
            tuple,
            clause,
            lhs,
            rhs,
            slack: rhs - lhs,
            detail: String::new(),
        }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

/// Result of one checker run.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub gamma: f64,
    /// False when the lemma's γ or geometric preconditions do not hold; the
    /// report then carries no violations.
    pub applicable: bool,
    pub violations: Vec<Violation>,
}

impl LemmaReport {
    fn new(lemma: LemmaId, gamma: f64) -> Self {
        LemmaReport {
            lemma,
            gamma,
            applicable: true,
            violations: Vec::new(),
        }
    }

    fn not_applicable(lemma: LemmaId, gamma: f64) -> Self {
        LemmaReport {
            applicable: false,
            ..LemmaReport::new(lemma, gamma)
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// One line per violation: `lemma_id gamma tuple lhs rhs slack`, tab
    /// separated, vertices 1-based. Multi-part lemmas append `/clause`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for v in &self.violations {
            let id = if v.clause == 0 {
                self.lemma.name().to_string()
            } else {
                format!("{}/{}", self.lemma.name(), v.clause)
            };
            let tuple: Vec<String> = v.tuple.iter().map(|x| (x.0 + 1).to_string()).collect();
            out.push_str(&format!(
                "{id}\t{}\t{}\t{}\t{}\t{}\n",
                self.gamma,
                tuple.join(","),
                v.lhs,
                v.rhs,
                v.slack
            ));
        }
        out
    }
}

fn steiner_vertices_of(instance: &Instance, opt: &SteinerTree) -> Vec<VertexId> {
    opt.vertices()
        .into_iter()
        .filter(|&v| !instance.is_terminal(v))
        .collect()
}

/// Every Steiner vertex of a stable optimum has degree above `2/(2−γ)`.
pub fn check_steiner_degree_lower(
    instance: &Instance,
    opt: &SteinerTree,
    gamma: f64,
) -> LemmaReport {
    if !(gamma > 1.0 && gamma < 2.0) {
        return LemmaReport::not_applicable(LemmaId::SteinerDegreeLower, gamma);
    }
    let mut report = LemmaReport::new(LemmaId::SteinerDegreeLower, gamma);
    let bound = steiner_degree_lower_bound(gamma);
    let degrees = opt.degrees();
    for s in steiner_vertices_of(instance, opt) {
        let d = degrees[&s] as f64;
        if d <= bound {
            report.violations.push(Violation::new(vec![s], 0, bound, d));
        }
    }
    report
}

/// Mutual unique nearest neighbours within the optimum's vertex set are
/// joined by an optimum edge. Holds for every instance, stable or not.
pub fn check_nearest_neighbor_edge(instance: &Instance, opt: &SteinerTree) -> LemmaReport {
    let mut report = LemmaReport::new(LemmaId::NearestNeighbor, f64::NAN);
    let vs: Vec<VertexId> = opt.vertices().into_iter().collect();
    // (nearest, its distance, distance of the runner-up)
    let nearest: Vec<Option<(VertexId, f64, f64)>> = vs
        .iter()
        .map(|&a| {
            let mut best: Option<(VertexId, f64)> = None;
            let mut second = f64::INFINITY;
            for &b in vs.iter().filter(|&&b| b != a) {
                let w = instance.weight(a, b);
                match best {
                    Some((_, bw)) if w >= bw => second = second.min(w),
                    Some((_, bw)) => {
                        second = bw;
                        best = Some((b, w));
                    }
                    None => best = Some((b, w)),
                }
            }
            best.filter(|&(_, bw)| bw < second)
                .map(|(b, bw)| (b, bw, second))
        })
        .collect();
    for (i, &a) in vs.iter().enumerate() {
        let Some((b, wab, second_a)) = nearest[i] else {
            continue;
        };
        if b < a {
            continue;
        }
        let j = vs.binary_search(&b).expect("b is a vertex of the optimum");
        if let Some((back, _, second_b)) = nearest[j] {
            if back == a && !opt.has_edge(a, b) {
                report
                    .violations
                    .push(Violation::new(vec![a, b], 0, wab, second_a.min(second_b)));
            }
        }
    }
    report
}

/// For every 2-path `a–b–c` of a stable optimum:
/// 1. `γ·max(w_ab, w_bc) < w_ac`;
/// 2. `w_ab + w_bc < (2/γ)·w_ac`;
/// 3. `(γ−1)·w_ab < w_bc` and `(γ−1)·w_bc < w_ab` (needs the triangle inequality).
pub fn check_adjacent_edge_props(
    instance: &Instance,
    opt: &SteinerTree,
    gamma: f64,
) -> LemmaReport {
    if gamma <= 1.0 {
        return LemmaReport::not_applicable(LemmaId::AdjacentEdges, gamma);
    }
    let mut report = LemmaReport::new(LemmaId::AdjacentEdges, gamma);
    for b in opt.vertices() {
        let nbrs = opt.neighbors(b);
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                let (wab, wbc, wac) = (
                    instance.weight(a, b),
                    instance.weight(b, c),
                    instance.weight(a, c),
                );
                let tuple = vec![a, b, c];
                let checks = [
                    (1, gamma * wab.max(wbc), wac),
                    (2, wab + wbc, 2.0 / gamma * wac),
                    (3, (gamma - 1.0) * wab, wbc),
                    (3, (gamma - 1.0) * wbc, wab),
                ];
                for (clause, lhs, rhs) in checks {
                    if lhs >= rhs {
                        report
                            .violations
                            .push(Violation::new(tuple.clone(), clause, lhs, rhs));
                    }
                }
            }
        }
    }
    report
}

/// Optimum edges as ordered pairs `(a, b)`, each edge in both orientations.
fn oriented_edges(opt: &SteinerTree) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
    opt.edges()
        .flat_map(|e| [(e.lo(), e.hi()), (e.hi(), e.lo())])
}

/// For an optimum edge `ab` and another optimum vertex `c`:
/// `w_ca ≤ γ(γ−1)·w_ab` forces `ca` into the optimum.
pub fn check_close_lemma(instance: &Instance, opt: &SteinerTree, gamma: f64) -> LemmaReport {
    if gamma <= 1.0 {
        return LemmaReport::not_applicable(LemmaId::Close, gamma);
    }
    let mut report = LemmaReport::new(LemmaId::Close, gamma);
    let vs = opt.vertices();
    for (a, b) in oriented_edges(opt) {
        let limit = gamma * (gamma - 1.0) * instance.weight(a, b);
        for &c in vs.iter().filter(|&&c| c != a && c != b) {
            let wca = instance.weight(c, a);
            if wca <= limit && !opt.has_edge(c, a) {
                report
                    .violations
                    .push(Violation::new(vec![a, b, c], 0, wca, limit));
            }
        }
    }
    report
}

/// For γ above the golden ratio: `w_ca ≥ γ·w_ab` for an optimum edge `ab`
/// keeps `ca` out of the optimum.
pub fn check_far_lemma(instance: &Instance, opt: &SteinerTree, gamma: f64) -> LemmaReport {
    if gamma <= GOLDEN_RATIO {
        return LemmaReport::not_applicable(LemmaId::Far, gamma);
    }
    let mut report = LemmaReport::new(LemmaId::Far, gamma);
    for (a, b) in oriented_edges(opt) {
        let limit = gamma * instance.weight(a, b);
        for c in opt.neighbors(a).into_iter().filter(|&c| c != b) {
            let wca = instance.weight(c, a);
            if wca >= limit {
                // The lemma asserts w_ca < γ·w_ab for every optimum edge ca.
                report
                    .violations
                    .push(Violation::new(vec![a, b, c], 0, wca, limit));
            }
        }
    }
    report
}

/// Whether `γ(γ−1)² > 1`, the gate for the close-iff characterisation.
pub fn close_iff_applies(gamma: f64) -> bool {
    gamma > 1.0 && gamma * (gamma - 1.0).powi(2) > 1.0
}

/// When `γ(γ−1)² > 1`: for an optimum edge `ab` and optimum vertex `c`,
/// `ca` is in the optimum exactly when `w_ca < w_ab/(γ−1)`.
/// Clause 1 flags a short pair missing from the optimum, clause 2 a long
/// optimum edge.
pub fn check_close2_iff(instance: &Instance, opt: &SteinerTree, gamma: f64) -> LemmaReport {
    if !close_iff_applies(gamma) {
        return LemmaReport::not_applicable(LemmaId::CloseIff, gamma);
    }
    let mut report = LemmaReport::new(LemmaId::CloseIff, gamma);
    let vs = opt.vertices();
    for (a, b) in oriented_edges(opt) {
        let limit = instance.weight(a, b) / (gamma - 1.0);
        for &c in vs.iter().filter(|&&c| c != a && c != b) {
            let wca = instance.weight(c, a);
            let short = wca < limit;
            let present = opt.has_edge(c, a);
            if short && !present {
                report
                    .violations
                    .push(Violation::new(vec![a, b, c], 1, wca, limit));
            } else if present && !short {
                report
                    .violations
                    .push(Violation::new(vec![a, b, c], 2, wca, limit));
            }
        }
    }
    report
}

/// Fails when two Steiner vertices are adjacent in `opt`.
pub fn check_no_adjacent_steiner(instance: &Instance, opt: &SteinerTree) -> Result<()> {
    match opt
        .edges()
        .find(|e| !instance.is_terminal(e.lo()) && !instance.is_terminal(e.hi()))
    {
        Some(e) => Err(Error::PreconditionViolated(format!(
            "Steiner vertices {} and {} are adjacent in the optimum",
            e.lo(),
            e.hi()
        ))),
        None => Ok(()),
    }
}

/// Terminal component fans relative to a partial optimum `h`.
///
/// A fan is selected when its average weight is below every edge joining
/// two terminal components, is minimal among all fans, and its edges lie
/// within a factor `1/(γ−1)` of one another; every selected fan must be a
/// subgraph of the optimum. The average divides by the number of component
/// merges the fan performs (see [`Fan::average`]); the per-edge average is
/// logged alongside in each violation's detail.
pub fn check_fan_lemma(
    instance: &Instance,
    opt: &SteinerTree,
    gamma: f64,
    h: &SteinerTree,
) -> Result<LemmaReport> {
    if gamma <= FAN_GAMMA {
        return Ok(LemmaReport::not_applicable(LemmaId::Fan, gamma));
    }
    check_no_adjacent_steiner(instance, opt)?;
    if let Some(e) = h.edges().find(|&e| !opt.contains(e)) {
        return Err(Error::PreconditionViolated(format!(
            "partial forest edge {e} is not in the optimum"
        )));
    }
    let mut report = LemmaReport::new(LemmaId::Fan, gamma);
    let comps = terminal_components(instance, h);
    let Some(cut) = comps.min_crossing_weight(instance, |_| true) else {
        return Ok(report);
    };
    let fans = terminal_component_fans(instance, &comps);
    let Some(best) = fans.iter().map(Fan::average).min_by(f64::total_cmp) else {
        return Ok(report);
    };
    for fan in fans
        .iter()
        .filter(|f| f.average() == best && best < cut && f.within_factor(gamma))
    {
        if fan.edges().any(|e| !opt.contains(e)) {
            let mut tuple = vec![fan.center];
            tuple.extend(&fan.leaves);
            report
                .violations
                .push(
                    Violation::new(tuple, 0, fan.average(), cut).with_detail(format!(
                        "avg_merges={} avg_edges={}",
                        fan.average(),
                        fan.edge_average()
                    )),
                );
        }
    }
    Ok(report)
}

/// In a Euclidean stable optimum, two terminal neighbours `a₁, a₂` of a
/// Steiner vertex `s` subtend an angle above `2·arcsin(γ/2)` at `s`.
/// `all_neighbors` extends the check to Steiner neighbours as well.
pub fn check_angle_lower(
    instance: &Instance,
    opt: &SteinerTree,
    gamma: f64,
    all_neighbors: bool,
) -> Result<LemmaReport> {
    if !instance.is_euclidean() || instance.coords().is_none() {
        return Err(Error::MissingCoordinates);
    }
    if !(gamma > 1.0 && gamma < 2.0) {
        return Ok(LemmaReport::not_applicable(LemmaId::AngleLower, gamma));
    }
    let mut report = LemmaReport::new(LemmaId::AngleLower, gamma);
    let limit = angle_threshold(gamma);
    for s in steiner_vertices_of(instance, opt) {
        let nbrs: Vec<VertexId> = opt
            .neighbors(s)
            .into_iter()
            .filter(|&v| all_neighbors || instance.is_terminal(v))
            .collect();
        for (i, &a1) in nbrs.iter().enumerate() {
            for &a2 in &nbrs[i + 1..] {
                let theta = angle_at(instance, s, a1, a2)?;
                if theta <= limit {
                    report
                        .violations
                        .push(Violation::new(vec![a1, s, a2], 0, limit, theta));
                }
            }
        }
    }
    Ok(report)
}

/// For Euclidean instances and γ > √2, Steiner degrees are at most
/// `−2/(2−γ²)`.
pub fn check_steiner_degree_upper(
    instance: &Instance,
    opt: &SteinerTree,
    gamma: f64,
) -> LemmaReport {
    if !instance.is_euclidean() || gamma <= std::f64::consts::SQRT_2 || gamma >= 2.0 {
        return LemmaReport::not_applicable(LemmaId::SteinerDegreeUpper, gamma);
    }
    let mut report = LemmaReport::new(LemmaId::SteinerDegreeUpper, gamma);
    let bound = steiner_degree_upper_bound(gamma);
    let degrees = opt.degrees();
    for s in steiner_vertices_of(instance, opt) {
        let d = degrees[&s] as f64;
        if d > bound {
            report.violations.push(Violation::new(vec![s], 0, d, bound));
        }
    }
    report
}

/// Runs every checker that makes sense for the instance. The fan lemma is
/// run with `H` empty; the angle lemma only on Euclidean instances. A fan
/// precondition failure (adjacent Steiner vertices) marks that report as
/// not applicable rather than failing the whole run.
pub fn check_all(instance: &Instance, opt: &SteinerTree, gamma: f64) -> Result<Vec<LemmaReport>> {
    let mut out = vec![
        check_steiner_degree_lower(instance, opt, gamma),
        check_nearest_neighbor_edge(instance, opt),
        check_adjacent_edge_props(instance, opt, gamma),
        check_close_lemma(instance, opt, gamma),
        check_far_lemma(instance, opt, gamma),
        check_close2_iff(instance, opt, gamma),
    ];
    out.push(
        match check_fan_lemma(instance, opt, gamma, &SteinerTree::new()) {
            Err(Error::PreconditionViolated(_)) => LemmaReport::not_applicable(LemmaId::Fan, gamma),
            other => other?,
        },
    );
    out.push(match check_angle_lower(instance, opt, gamma, false) {
        Err(Error::MissingCoordinates) => LemmaReport::not_applicable(LemmaId::AngleLower, gamma),
        other => other?,
    });
    out.push(check_steiner_degree_upper(instance, opt, gamma));
    Ok(out)
}

/// Edges of `opt` as a canonical list, handy for building partial forests.
pub fn edge_list(opt: &SteinerTree) -> Vec<Edge> {
    opt.edges().collect()
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    fn triangle() -> (Instance, SteinerTree) {
        let inst = Instance::complete(
            vec![
                vec![0.0, 1.0, 2.9],
                vec![1.0, 0.0, 2.0],
                vec![2.9, 2.0, 0.0],
            ],
            &[VertexId(0), VertexId(1), VertexId(2)],
        )
        .unwrap();
        (
            inst,
            SteinerTree::from_edges([Edge::new(0, 1), Edge::new(1, 2)]),
        )
    }

    fn star(spokes: usize) -> (Instance, SteinerTree) {
        let n = spokes + 1;
        let mut w = vec![vec![2.0; n]; n];
        for (i, row) in w.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for i in 0..spokes {
            w[i][spokes] = 1.0;
            w[spokes][i] = 1.0;
        }
        let terminals: Vec<VertexId> = (0..spokes).map(VertexId).collect();
        let inst = Instance::complete(w, &terminals).unwrap();
        let opt = SteinerTree::from_edges((0..spokes).map(|i| Edge::new(i, spokes)));
        (inst, opt)
    }

    #[test]
    fn degree_lower() {
        let (inst, opt) = star(3);
        let r = check_steiner_degree_lower(&inst, &opt, 1.3);
        assert!(r.applicable && r.passed());
        let r = check_steiner_degree_lower(&inst, &opt, 1.5);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].rhs, 3.0);
        assert_eq!(steiner_degree_lower_bound(1.5), 4.0);
        let (inst, opt) = triangle();
        assert!(check_steiner_degree_lower(&inst, &opt, 1.9).passed());
        assert!(!check_steiner_degree_lower(&inst, &opt, 2.0).applicable);
    }

    #[test]
    fn nearest_neighbor() {
        let (inst, opt) = triangle();
        assert!(check_nearest_neighbor_edge(&inst, &opt).passed());
        let bad = SteinerTree::from_edges([Edge::new(0, 2), Edge::new(1, 2)]);
        let r = check_nearest_neighbor_edge(&inst, &bad);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].tuple, vec![VertexId(0), VertexId(1)]);
    }

    #[test]
    fn adjacent_edges() {
        let (inst, opt) = triangle();
        assert!(check_adjacent_edge_props(&inst, &opt, 1.4).passed());
        let r = check_adjacent_edge_props(&inst, &opt, 1.46);
        assert!(r.violations.iter().any(|v| v.clause == 1));
        let single = SteinerTree::from_edges([Edge::new(0, 1)]);
        assert!(check_adjacent_edge_props(&inst, &single, 1.9).passed());
    }

    #[test]
    fn close_far_and_iff() {
        let (inst, opt) = star(3);
        assert!(check_close_lemma(&inst, &opt, 1.3).passed());
        assert!(check_close_lemma(&inst, &opt, 1.2).passed());
        assert!(!check_far_lemma(&inst, &opt, 1.5).applicable);
        assert!(check_far_lemma(&inst, &opt, 1.7).passed());
        assert!(close_iff_applies(1.8));
        assert!(!close_iff_applies(1.6));
        assert!(!check_close2_iff(&inst, &opt, 1.6).applicable);
    }

    #[test]
    fn fan_selection() {
        // Eleven spokes give a margin of 20/11 ≈ 1.818, so 1.8 is certified.
        let (inst, opt) = star(11);
        let r = check_fan_lemma(&inst, &opt, 1.8, &SteinerTree::new()).unwrap();
        assert!(r.applicable && r.passed());
        // With H = OPT nothing is left to connect.
        let r = check_fan_lemma(&inst, &opt, 1.8, &opt).unwrap();
        assert!(r.passed());
        // The spoke fan is selected: claiming a path as optimum exposes it.
        let path = SteinerTree::from_edges((0..10).map(|i| Edge::new(i, i + 1)));
        let r = check_fan_lemma(&inst, &path, 1.8, &SteinerTree::new()).unwrap();
        assert!(!r.passed());
        assert!(
            !check_fan_lemma(&inst, &opt, 1.7, &SteinerTree::new())
                .unwrap()
                .applicable
        );
    }

    #[test]
    fn fan_rejects_adjacent_steiner() {
        let inst = Instance::complete(
            vec![
                vec![0.0, 2.0, 1.0, 2.0],
                vec![2.0, 0.0, 2.0, 1.0],
                vec![1.0, 2.0, 0.0, 1.0],
                vec![2.0, 1.0, 1.0, 0.0],
            ],
            &[VertexId(0), VertexId(1)],
        )
        .unwrap();
        let opt = SteinerTree::from_edges([Edge::new(0, 2), Edge::new(2, 3), Edge::new(1, 3)]);
        assert!(matches!(
            check_fan_lemma(&inst, &opt, 1.8, &SteinerTree::new()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn tsv_lines() {
        let (inst, opt) = triangle();
        let r = check_adjacent_edge_props(&inst, &opt, 1.46);
        let tsv = r.to_tsv();
        assert!(tsv.starts_with("adjacent-edges/1\t1.46\t1,2,3\t"));
        assert_eq!(tsv.lines().count(), r.violations.len());
    }
}
