//! Perturbation semantics, the stability margin γ*, and certification.
//!
//! An adversary may multiply the weight of every vertex pair by a factor in
//! `[1, γ]`; an instance is γ-stable when the optimal tree stays the unique
//! optimum under every such perturbation. Against a fixed rival tree `S` the
//! adversary's best move inflates exactly `OPT \ S`, which turns stability
//! into `w(S \ OPT) > γ · w(OPT \ S)` for every canonical `S ≠ OPT`. The margin
//!
//! ```text
//! γ* = min over canonical S ≠ OPT of  w(S \ OPT) / w(OPT \ S)
//! ```
//!
//! is therefore the supremum of the γ for which the instance is stable.
//! Everything runs on the complete instance, so every pair is perturbable.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{
    enumerate_canonical_trees, is_terminal_mask, runner_up, solve_with_runner_up,
    EnumerationBudget, ExactMethod, TIE_TOL,
};
use crate::model::{tree_weight, Edge, Instance, SteinerTree, Weights};

/// Per-pair multipliers in `[1, γ]`; unlisted pairs keep multiplier 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    gamma: f64,
    multipliers: BTreeMap<Edge, f64>,
}

impl Perturbation {
    pub fn new(gamma: f64, multipliers: BTreeMap<Edge, f64>) -> Result<Self> {
        check_gamma(gamma)?;
        for (&e, &m) in &multipliers {
            if !(1.0..=gamma).contains(&m) {
                return Err(Error::MultiplierOutOfRange {
                    u: e.lo(),
                    v: e.hi(),
                    value: m,
                    gamma,
                });
            }
        }
        Ok(Perturbation { gamma, multipliers })
    }

    pub fn identity(gamma: f64) -> Result<Self> {
        Self::new(gamma, BTreeMap::new())
    }

    /// Every pair of the instance multiplied by γ.
    pub fn uniform(instance: &Instance, gamma: f64) -> Result<Self> {
        Self::new(gamma, instance.edges().map(|e| (e, gamma)).collect())
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn multiplier(&self, e: Edge) -> f64 {
        self.multipliers.get(&e).copied().unwrap_or(1.0)
    }

    pub fn multipliers(&self) -> &BTreeMap<Edge, f64> {
        &self.multipliers
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 1.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "gamma must exceed 1, got {gamma}"
        )))
    }
}

/// Applies the multipliers. The result is no longer claimed metric or
/// Euclidean, since perturbed weights need not satisfy either property.
pub fn apply_perturbation(instance: &Instance, perturbation: &Perturbation) -> Result<Instance> {
    let mut weights = instance.weights.clone();
    for (&e, &m) in &perturbation.multipliers {
        if !instance.contains(e.hi()) {
            return Err(Error::UnknownEdge(e.lo(), e.hi()));
        }
        if !(1.0..=perturbation.gamma).contains(&m) {
            return Err(Error::MultiplierOutOfRange {
                u: e.lo(),
                v: e.hi(),
                value: m,
                gamma: perturbation.gamma,
            });
        }
        weights.set(e.lo().0, e.hi().0, instance.edge_weight(e) * m);
    }
    Ok(instance.with_weights(weights, false, false))
}

/// The adversary's optimum against `rival`: γ on `opt \ rival`, 1 elsewhere.
/// Among all admissible perturbations it minimises `w'(rival) − w'(opt)`.
pub fn worst_case_perturbation(
    instance: &Instance,
    opt: &SteinerTree,
    rival: &SteinerTree,
    gamma: f64,
) -> Result<Perturbation> {
    if opt == rival {
        return Err(Error::SameTree);
    }
    opt.check(instance)?;
    rival.check(instance)?;
    Perturbation::new(gamma, opt.difference(rival).map(|e| (e, gamma)).collect())
}

/// `w'(rival) − w'(opt)` under the perturbed weights.
pub fn perturbed_margin(
    instance: &Instance,
    perturbation: &Perturbation,
    opt: &SteinerTree,
    rival: &SteinerTree,
) -> Result<f64> {
    let perturbed = apply_perturbation(instance, perturbation)?;
    Ok(tree_weight(&perturbed, rival)? - tree_weight(&perturbed, opt)?)
}

/// `w(S \ OPT) / w(OPT \ S)`, infinite when `OPT ⊆ S`.
pub fn rival_ratio(instance: &Instance, opt: &SteinerTree, rival: &SteinerTree) -> f64 {
    ratio_on(&instance.weights, opt, rival)
}

fn ratio_on(w: &Weights, opt: &SteinerTree, rival: &SteinerTree) -> f64 {
    let gained: f64 = rival.difference(opt).map(|e| w.edge(e)).sum();
    let lost: f64 = opt.difference(rival).map(|e| w.edge(e)).sum();
    if lost > 0.0 {
        gained / lost
    } else {
        f64::INFINITY
    }
}

/// Outcome of a stability-margin computation.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// In `[1, +inf]`; the instance is γ-stable exactly for `1 < γ < gamma_star`.
    pub gamma_star: f64,
    pub opt: SteinerTree,
    pub opt_weight: f64,
    /// A rival attaining the margin; absent only when no rival exists.
    pub witness: Option<SteinerTree>,
    pub opt_unique: bool,
    /// False when a budget cut the search short; `gamma_star` is then only
    /// an upper bound over the trees seen.
    pub exhaustive: bool,
}

impl StabilityReport {
    pub fn is_stable_at(&self, gamma: f64) -> bool {
        self.opt_unique && gamma < self.gamma_star
    }
}

/// Exact γ* by parametric search.
///
/// Starting from the runner-up's ratio λ, each round inflates the optimum's
/// edges by λ and asks for the lightest tree missing at least one of them.
/// If it undercuts `λ · w(OPT)`, its ratio is a strictly smaller λ;
/// otherwise no canonical rival has a ratio below λ and λ is γ*.
pub fn gamma_star(instance: &Instance, budget: EnumerationBudget) -> Result<StabilityReport> {
    gamma_star_with(instance, budget, ExactMethod::Auto)
}

pub fn gamma_star_with(
    instance: &Instance,
    budget: EnumerationBudget,
    method: ExactMethod,
) -> Result<StabilityReport> {
    budget.check()?;
    let steiner = instance.vertex_count() - instance.terminals().len();
    if !budget.covers(steiner) {
        return Err(Error::BudgetExceeded(format!(
            "Steiner subsets limited below the {steiner} candidates"
        )));
    }
    let mut tracker = budget.tracker();
    let sol = solve_with_runner_up(method, instance, &mut tracker)?;
    let mut report = StabilityReport {
        gamma_star: f64::INFINITY,
        opt: sol.tree,
        opt_weight: sol.weight,
        witness: None,
        opt_unique: sol.unique,
        exhaustive: true,
    };
    let Some((first, _)) = sol.runner_up else {
        return Ok(report);
    };
    if !sol.unique {
        report.gamma_star = 1.0;
        report.witness = Some(first);
        return Ok(report);
    }

    let mask = is_terminal_mask(instance);
    let opt = report.opt.clone();
    let mut lambda = rival_ratio(instance, &opt, &first);
    let mut witness = first;
    for _ in 0..200 {
        let mut inflated = instance.weights.clone();
        for e in opt.edges() {
            inflated.set(e.lo().0, e.hi().0, instance.edge_weight(e) * lambda);
        }
        let base = inflated.sum(opt.edge_set());
        let Some((candidate, weight)) = runner_up(method, &inflated, &mask, &opt, &mut tracker)?
        else {
            break;
        };
        if weight >= base - TIE_TOL * base {
            break;
        }
        let ratio = rival_ratio(instance, &opt, &candidate);
        if ratio >= lambda {
            break;
        }
        lambda = ratio;
        witness = candidate;
    }
    report.gamma_star = lambda.max(1.0);
    report.witness = Some(witness);
    Ok(report)
}

/// γ* straight from the definition: enumerate every canonical tree, take the
/// optimum, then the minimum ratio over all rivals. Ties in the ratio go to
/// the rival that comes first in canonical edge-set order.
pub fn gamma_star_by_enumeration(
    instance: &Instance,
    budget: EnumerationBudget,
) -> Result<StabilityReport> {
    budget.check()?;
    let mut stream = enumerate_canonical_trees(instance, budget);
    let mut trees: Vec<(SteinerTree, f64)> = Vec::new();
    for tree in stream.by_ref() {
        let w = tree_weight(instance, &tree)?;
        trees.push((tree, w));
    }
    let exhaustive = stream.is_exhaustive();
    let (opt_idx, _) = trees
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .ok_or_else(|| Error::BudgetExceeded("no tree enumerated".into()))?;
    let (opt, opt_weight) = trees[opt_idx].clone();

    let tied = trees
        .iter()
        .enumerate()
        .filter(|&(i, (_, w))| i != opt_idx && w - opt_weight <= TIE_TOL * opt_weight)
        .map(|(_, (t, _))| t)
        .min();
    if let Some(t) = tied {
        return Ok(StabilityReport {
            gamma_star: 1.0,
            opt,
            opt_weight,
            witness: Some(t.clone()),
            opt_unique: false,
            exhaustive,
        });
    }
    let best = trees
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != opt_idx)
        .map(|(_, (t, _))| (rival_ratio(instance, &opt, t), t))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)));
    Ok(StabilityReport {
        gamma_star: best.map_or(f64::INFINITY, |(r, _)| r.max(1.0)),
        opt,
        opt_weight,
        witness: best.map(|(_, t)| t.clone()),
        opt_unique: true,
        exhaustive,
    })
}

/// Verdict of [`certify`].
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub gamma: f64,
    pub stable: bool,
    pub report: StabilityReport,
    /// For unstable verdicts: a rival that ties or beats the optimum under
    /// `perturbation`.
    pub witness: Option<SteinerTree>,
    pub perturbation: Option<Perturbation>,
}

/// Decides γ-stability; an unstable verdict carries a rival and the
/// perturbation under which it ties or beats the optimum.
pub fn certify(instance: &Instance, gamma: f64, budget: EnumerationBudget) -> Result<Certificate> {
    check_gamma(gamma)?;
    let report = gamma_star(instance, budget)?;
    let stable = report.is_stable_at(gamma);
    let (witness, perturbation) = if stable {
        (None, None)
    } else {
        let witness = report
            .witness
            .clone()
            .expect("an unstable instance always has a rival");
        let p = worst_case_perturbation(instance, &report.opt, &witness, gamma)?;
        (Some(witness), Some(p))
    };
    Ok(Certificate {
        gamma,
        stable,
        report,
        witness,
        perturbation,
    })
}

/// Recomputes the exact optimum under the perturbed weights and checks that
/// it is the original optimum and still unique.
pub fn is_opt_preserved(
    instance: &Instance,
    perturbation: &Perturbation,
    budget: EnumerationBudget,
) -> Result<bool> {
    budget.check()?;
    let perturbed = apply_perturbation(instance, perturbation)?;
    let mut tracker = budget.tracker();
    let before = solve_with_runner_up(ExactMethod::Auto, instance, &mut tracker)?;
    let after = solve_with_runner_up(ExactMethod::Auto, &perturbed, &mut tracker)?;
    Ok(before.unique && after.unique && before.tree == after.tree)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::model::VertexId;

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b)
    }

    fn triangle() -> Instance {
        Instance::complete(
            vec![
                vec![0.0, 1.0, 2.9],
                vec![1.0, 0.0, 2.0],
                vec![2.9, 2.0, 0.0],
            ],
            &[VertexId(0), VertexId(1), VertexId(2)],
        )
        .unwrap()
    }

    fn star() -> Instance {
        let mut w = vec![vec![2.0; 4]; 4];
        for (i, row) in w.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for i in 0..3 {
            w[i][3] = 1.0;
            w[3][i] = 1.0;
        }
        Instance::complete(w, &[VertexId(0), VertexId(1), VertexId(2)]).unwrap()
    }

    #[test]
    fn identity_perturbation_only_clears_flags() {
        let inst = triangle();
        let out = apply_perturbation(&inst, &Perturbation::identity(1.5).unwrap()).unwrap();
        assert!(!out.is_metric() && !out.is_euclidean());
        assert_eq!(out.weights, inst.weights);
    }

    #[test]
    fn single_edge_perturbation() {
        let inst = triangle();
        let p = Perturbation::new(1.5, [(e(0, 1), 1.5)].into()).unwrap();
        let out = apply_perturbation(&inst, &p).unwrap();
        assert_eq!(out.weight(VertexId(0), VertexId(1)), 1.5);
        assert_eq!(out.weight(VertexId(1), VertexId(2)), 2.0);
        assert_eq!(out.weight(VertexId(0), VertexId(2)), 2.9);
    }

    #[test]
    fn out_of_range_multiplier_rejected() {
        assert!(matches!(
            Perturbation::new(1.5, [(e(0, 1), 1.6)].into()),
            Err(Error::MultiplierOutOfRange { .. })
        ));
        assert!(matches!(
            Perturbation::new(1.5, [(e(0, 1), 0.9)].into()),
            Err(Error::MultiplierOutOfRange { .. })
        ));
    }

    #[test]
    fn worst_case_targets_set_difference() {
        let inst = triangle();
        let opt = SteinerTree::from_edges([e(0, 1), e(1, 2)]);
        let rival = SteinerTree::from_edges([e(0, 1), e(0, 2)]);
        let p = worst_case_perturbation(&inst, &opt, &rival, 1.4).unwrap();
        assert_eq!(p.multipliers().len(), 1);
        assert_eq!(p.multiplier(e(1, 2)), 1.4);
        // 3.9 − (1 + 1.4·2) = 0.1
        let m = perturbed_margin(&inst, &p, &opt, &rival).unwrap();
        assert!((m - 0.1).abs() < 1e-12);

        let other = SteinerTree::from_edges([e(0, 2)]);
        let inst2 = Instance::complete(
            vec![
                vec![0.0, 1.0, 1.5],
                vec![1.0, 0.0, 1.0],
                vec![1.5, 1.0, 0.0],
            ],
            &[VertexId(0), VertexId(2)],
        )
        .unwrap();
        let opt2 = SteinerTree::from_edges([e(0, 1), e(1, 2)]);
        let p = worst_case_perturbation(&inst2, &opt2, &other, 1.2).unwrap();
        assert_eq!(p.multipliers().len(), 2);
        assert!(matches!(
            worst_case_perturbation(&inst, &opt, &opt, 1.2),
            Err(Error::SameTree)
        ));
    }

    #[test]
    fn triangle_margin() {
        let inst = triangle();
        for report in [
            gamma_star(&inst, EnumerationBudget::default()).unwrap(),
            gamma_star_by_enumeration(&inst, EnumerationBudget::default()).unwrap(),
        ] {
            assert_eq!(report.gamma_star, 1.45);
            assert_eq!(
                report.witness,
                Some(SteinerTree::from_edges([e(0, 1), e(0, 2)]))
            );
            assert!(report.opt_unique && report.exhaustive);
        }
    }

    #[test]
    fn star_margin() {
        let inst = star();
        let paths = [
            SteinerTree::from_edges([e(0, 1), e(0, 2)]),
            SteinerTree::from_edges([e(0, 1), e(1, 2)]),
            SteinerTree::from_edges([e(0, 2), e(1, 2)]),
        ];
        let enumerated = gamma_star_by_enumeration(&inst, EnumerationBudget::default()).unwrap();
        assert!((enumerated.gamma_star - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(enumerated.witness.as_ref(), Some(&paths[0]));
        for method in [ExactMethod::SubsetMst, ExactMethod::DreyfusWagner] {
            let r = gamma_star_with(&inst, EnumerationBudget::default(), method).unwrap();
            assert!((r.gamma_star - 4.0 / 3.0).abs() < 1e-12);
            assert!(paths.contains(r.witness.as_ref().unwrap()));
        }
    }

    #[test]
    fn no_rival_means_infinite_margin() {
        let inst = Instance::complete(
            vec![vec![0.0, 3.0], vec![3.0, 0.0]],
            &[VertexId(0), VertexId(1)],
        )
        .unwrap();
        let r = gamma_star(&inst, EnumerationBudget::default()).unwrap();
        assert_eq!(r.gamma_star, f64::INFINITY);
        assert!(r.witness.is_none());
        assert!(
            certify(&inst, 100.0, EnumerationBudget::default())
                .unwrap()
                .stable
        );
    }

    #[test]
    fn ties_give_margin_one() {
        let inst = Instance::complete(
            vec![
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
            &[VertexId(0), VertexId(1), VertexId(2)],
        )
        .unwrap();
        let r = gamma_star(&inst, EnumerationBudget::default()).unwrap();
        assert_eq!(r.gamma_star, 1.0);
        assert!(!r.opt_unique);
        let c = certify(&inst, 1.0001, EnumerationBudget::default()).unwrap();
        assert!(!c.stable);
    }

    #[test]
    fn certify_triangle() {
        let inst = triangle();
        assert!(
            certify(&inst, 1.4, EnumerationBudget::default())
                .unwrap()
                .stable
        );
        assert!(
            certify(&inst, 1.0 + 1e-9, EnumerationBudget::default())
                .unwrap()
                .stable
        );
        let c = certify(&inst, 1.5, EnumerationBudget::default()).unwrap();
        assert!(!c.stable);
        let witness = c.witness.unwrap();
        assert_eq!(witness, SteinerTree::from_edges([e(0, 1), e(0, 2)]));
        let m = perturbed_margin(&inst, &c.perturbation.unwrap(), &c.report.opt, &witness).unwrap();
        assert!(m <= 0.0);
        assert!(certify(&inst, 1.0, EnumerationBudget::default()).is_err());
    }

    #[test]
    fn opt_preservation() {
        let inst = triangle();
        let b = EnumerationBudget::default();
        assert!(is_opt_preserved(&inst, &Perturbation::identity(1.5).unwrap(), b).unwrap());
        let p = Perturbation::new(1.5, [(e(1, 2), 1.5)].into()).unwrap();
        assert!(!is_opt_preserved(&inst, &p, b).unwrap());
        let u = Perturbation::uniform(&inst, 1.7).unwrap();
        assert!(is_opt_preserved(&inst, &u, b).unwrap());
    }
}
