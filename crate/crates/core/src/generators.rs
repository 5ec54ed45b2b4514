//! Seeded instance generators, including rejection sampling for instances
//! with a certified stability margin.
//!
//! Every generator draws from a ChaCha8 stream seeded with the `GenSpec` seed,
//! so identical specs give bit-identical instances. The stream algorithm is
//! recorded in the provenance written alongside each file.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{brute_force_opt, EnumerationBudget};
use crate::model::{euclidean_distance, euclidean_instance, metric_closure, Instance, VertexId};
use crate::stability::{gamma_star, StabilityReport};
use crate::stp::{format_number, write_stp_with_comment};

/// Identifier of the pseudo-random stream, stored in provenance.
pub const RNG_ALGORITHM: &str = "chacha8";

pub const DEFAULT_MAX_TRIES: usize = 10_000;

/// The base family an instance is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Points uniform in `[0, scale]^dim`.
    Euclidean { dim: usize },
    /// Pair weights log-uniform in `[scale/10, scale]`, then metrically closed.
    RandomMetric,
}

impl Model {
    pub fn name(self) -> String {
        match self {
            Model::Euclidean { dim } => format!("euclidean-{dim}d"),
            Model::RandomMetric => "metric".into(),
        }
    }
}

/// Everything that determines a generated instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub model: Model,
    /// Total vertex count.
    pub n: usize,
    /// Terminal count; the first `t` vertices are the terminals.
    pub t: usize,
    pub seed: u64,
    pub target_gamma: Option<f64>,
    pub max_tries: usize,
    pub scale: f64,
}

impl GenSpec {
    pub fn euclidean(dim: usize, n: usize, t: usize, seed: u64) -> Self {
        GenSpec {
            model: Model::Euclidean { dim },
            n,
            t,
            seed,
            target_gamma: None,
            max_tries: DEFAULT_MAX_TRIES,
            scale: 100.0,
        }
    }

    pub fn random_metric(n: usize, t: usize, seed: u64) -> Self {
        GenSpec {
            model: Model::RandomMetric,
            ..GenSpec::euclidean(2, n, t, seed)
        }
    }

    pub fn with_target(mut self, gamma: f64) -> Self {
        self.target_gamma = Some(gamma);
        self
    }

    pub fn with_max_tries(mut self, tries: usize) -> Self {
        self.max_tries = tries;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.t < 2 || self.t > self.n {
            return bad(format!(
                "need 2 <= t <= n, got t = {}, n = {}",
                self.t, self.n
            ));
        }
        if let Model::Euclidean { dim: 0 } = self.model {
            return bad("dimension must be at least 1".into());
        }
        if let Some(g) = self.target_gamma {
            if !(g > 1.0 && g < 2.0) {
                return bad(format!("target gamma {g} outside (1, 2)"));
            }
        }
        if self.max_tries == 0 {
            return bad("max_tries must be positive".into());
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return bad(format!("scale {} must be positive", self.scale));
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn terminal_flags(&self) -> Vec<bool> {
        (0..self.n).map(|i| i < self.t).collect()
    }
}

fn draw_point(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(lo..hi)).collect()
}

fn draw_euclidean(rng: &mut ChaCha8Rng, spec: &GenSpec, dim: usize) -> Result<Instance> {
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(spec.n);
    let mut resamples = 0;
    while points.len() < spec.n {
        let p = draw_point(rng, dim, 0.0, spec.scale);
        if let Some(j) = points.iter().position(|q| euclidean_distance(q, &p) == 0.0) {
            resamples += 1;
            if resamples >= spec.max_tries {
                return Err(Error::DuplicatePoint(VertexId(j), VertexId(points.len())));
            }
            continue;
        }
        points.push(p);
    }
    euclidean_instance(&points, &spec.terminal_flags())
}

fn draw_metric(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<Instance> {
    let mut edges = Vec::with_capacity(spec.n * (spec.n - 1) / 2);
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            let w = spec.scale * 10f64.powf(-rng.gen::<f64>());
            edges.push((VertexId(u), VertexId(v), w));
        }
    }
    let terminals: Vec<VertexId> = (0..spec.t).map(VertexId).collect();
    metric_closure(spec.n, &terminals, &edges)
}

fn draw(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<Instance> {
    match spec.model {
        Model::Euclidean { dim } => draw_euclidean(rng, spec, dim),
        Model::RandomMetric => draw_metric(rng, spec),
    }
}

/// `n` uniform points; coincident points are redrawn up to `max_tries` times.
pub fn random_euclidean(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let Model::Euclidean { dim } = spec.model else {
        return Err(Error::InvalidParameter("model is not Euclidean".into()));
    };
    draw_euclidean(&mut spec.rng(), spec, dim)
}

/// Random pair weights completed to their shortest-path metric.
pub fn random_metric(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    if spec.model != Model::RandomMetric {
        return Err(Error::InvalidParameter("model is not random-metric".into()));
    }
    draw_metric(&mut spec.rng(), spec)
}

/// Draws once from the model of `spec`.
pub fn sample(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    draw(&mut spec.rng(), spec)
}

/// Draws from the base model until an instance has a unique optimum and
/// `γ* ≥ target_gamma`; its first draw is the instance [`sample`] returns.
pub fn stable_instance_search(spec: &GenSpec) -> Result<(Instance, StabilityReport)> {
    spec.validate()?;
    let target = spec
        .target_gamma
        .ok_or_else(|| Error::InvalidParameter("stable search needs a target gamma".into()))?;
    let mut rng = spec.rng();
    let mut best = 1.0f64;
    for _ in 0..spec.max_tries {
        let inst = draw(&mut rng, spec)?;
        let report = gamma_star(&inst, EnumerationBudget::default())?;
        if report.opt_unique && report.gamma_star >= target {
            return Ok((inst, report));
        }
        best = best.max(report.gamma_star);
    }
    Err(Error::SearchExhausted {
        tries: spec.max_tries,
        best,
    })
}

/// A Euclidean instance whose optimum uses no Steiner vertex: candidates sit
/// at least the terminal diameter away from every terminal, hence outside
/// every terminal pair's lens. Each draw is validated with the exact solver,
/// and against `target_gamma` when one is set.
pub fn planted_no_steiner(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let Model::Euclidean { dim } = spec.model else {
        return Err(Error::InvalidParameter(
            "planting needs a Euclidean model".into(),
        ));
    };
    let mut rng = spec.rng();
    let mut best = 1.0f64;
    let margin = 2.0 * spec.scale * (dim as f64).sqrt();
    for _ in 0..spec.max_tries {
        let terminals = draw_euclidean(&mut rng, &GenSpec { n: spec.t, ..*spec }, dim)?;
        let mut points: Vec<Vec<f64>> = terminals.coords().expect("Euclidean").to_vec();
        let diameter = terminals
            .edges()
            .map(|e| terminals.edge_weight(e))
            .fold(0.0, f64::max);
        let mut placed = true;
        while points.len() < spec.n {
            let mut found = false;
            for _ in 0..spec.max_tries {
                let p = draw_point(&mut rng, dim, -margin, spec.scale + margin);
                let clear = points[..spec.t]
                    .iter()
                    .all(|q| euclidean_distance(q, &p) >= diameter);
                let distinct = points.iter().all(|q| euclidean_distance(q, &p) > 0.0);
                if clear && distinct {
                    points.push(p);
                    found = true;
                    break;
                }
            }
            if !found {
                placed = false;
                break;
            }
        }
        if !placed {
            continue;
        }
        let inst = euclidean_instance(&points, &spec.terminal_flags())?;
        let opt = brute_force_opt(&inst, EnumerationBudget::default())?;
        if opt.tree.vertices().iter().any(|&v| !inst.is_terminal(v)) {
            continue;
        }
        match spec.target_gamma {
            None => return Ok(inst),
            Some(target) => {
                let report = gamma_star(&inst, EnumerationBudget::default())?;
                if report.opt_unique && report.gamma_star >= target {
                    return Ok(inst);
                }
                best = best.max(report.gamma_star);
            }
        }
    }
    Err(Error::SearchExhausted {
        tries: spec.max_tries,
        best,
    })
}

/// Comment entries recording how an instance was produced.
pub fn provenance(spec: &GenSpec, report: Option<&StabilityReport>) -> Vec<(&'static str, String)> {
    let mut out = vec![
        (
            "Name",
            format!(
                "{}-n{}-t{}-s{}",
                spec.model.name(),
                spec.n,
                spec.t,
                spec.seed
            ),
        ),
        ("Creator", "steiner-stability".to_string()),
        ("Generator", RNG_ALGORITHM.to_string()),
        ("Model", spec.model.name()),
        ("Seed", spec.seed.to_string()),
        ("Scale", format_number(spec.scale)),
    ];
    if let Some(g) = spec.target_gamma {
        out.push(("TargetGamma", format_number(g)));
    }
    if let Some(r) = report {
        let g = if r.gamma_star.is_infinite() {
            "inf".to_string()
        } else {
            format_number(r.gamma_star)
        };
        out.push(("GammaStar", g));
    }
    out
}

/// `root/<model>/<gamma>/<seed>.stp`, with `any` when no target is set.
pub fn corpus_path(root: &Path, spec: &GenSpec) -> PathBuf {
    let gamma = spec.target_gamma.map_or("any".to_string(), format_number);
    root.join(spec.model.name())
        .join(gamma)
        .join(format!("{}.stp", spec.seed))
}

/// Writes `instance` with its provenance to the corpus location for `spec`.
pub fn write_corpus_file(
    root: &Path,
    spec: &GenSpec,
    instance: &Instance,
    report: Option<&StabilityReport>,
) -> Result<PathBuf> {
    let path = corpus_path(root, spec);
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(
        &path,
        write_stp_with_comment(instance, &provenance(spec, report)),
    )?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    #[test]
    fn euclidean_is_deterministic() {
        let spec = GenSpec::euclidean(2, 5, 3, 0);
        let a = random_euclidean(&spec).unwrap();
        assert_eq!(a, random_euclidean(&spec).unwrap());
        assert!(validate(&a).ok() && a.is_euclidean());
        assert_ne!(a, random_euclidean(&GenSpec { seed: 1, ..spec }).unwrap());
    }

    #[test]
    fn metric_is_closed() {
        for seed in 0..20 {
            let inst = random_metric(&GenSpec::random_metric(6, 3, seed)).unwrap();
            assert!(inst.is_metric() && validate(&inst).ok());
        }
    }

    #[test]
    fn spec_validation() {
        assert!(GenSpec::euclidean(2, 3, 4, 0).validate().is_err());
        assert!(GenSpec::euclidean(0, 3, 2, 0).validate().is_err());
        assert!(GenSpec::euclidean(2, 3, 2, 0)
            .with_target(2.0)
            .validate()
            .is_err());
        assert!(random_metric(&GenSpec::euclidean(2, 3, 2, 0)).is_err());
    }

    #[test]
    fn stable_search_meets_target() {
        let spec = GenSpec::euclidean(2, 6, 4, 3).with_target(1.2);
        let (inst, report) = stable_instance_search(&spec).unwrap();
        assert!(report.gamma_star >= 1.2);
        assert_eq!(
            gamma_star(&inst, EnumerationBudget::default()).unwrap(),
            report
        );
        assert_eq!(stable_instance_search(&spec).unwrap().0, inst);
    }

    #[test]
    fn impossible_target_exhausts() {
        let spec = GenSpec::random_metric(5, 3, 0)
            .with_target(1.99)
            .with_max_tries(50);
        assert!(matches!(
            stable_instance_search(&spec),
            Err(Error::SearchExhausted { tries: 50, .. })
        ));
    }

    #[test]
    fn planted_instances_avoid_steiner_vertices() {
        for seed in 0..5 {
            let inst = planted_no_steiner(&GenSpec::euclidean(2, 7, 4, seed)).unwrap();
            let opt = brute_force_opt(&inst, EnumerationBudget::default()).unwrap();
            assert!(opt.tree.vertices().iter().all(|&v| inst.is_terminal(v)));
        }
        let two = planted_no_steiner(&GenSpec::euclidean(2, 4, 2, 0)).unwrap();
        let r = gamma_star(&two, EnumerationBudget::default()).unwrap();
        assert!(r.gamma_star > 2.0);
    }

    #[test]
    fn corpus_layout() {
        let spec = GenSpec::euclidean(2, 5, 3, 7).with_target(1.57);
        let p = corpus_path(Path::new("corpus"), &spec);
        assert_eq!(p, Path::new("corpus/euclidean-2d/1.57/7.stp"));
    }
}
