//! The command-line front end: argument definitions, dispatch, report
//! formatting and exit codes. The binary only parses arguments and calls
//! [`run`].
//!
//! Exit codes: 0 success (stable, no violations); 1 unstable instance or
//! lemma violations; 2 unreadable input or bad parameters; 3 budget
//! exceeded or generator search exhausted; 4 inner oracle broke its
//! approximation contract.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{brute_force_opt, dreyfus_wagner, EnumerationBudget};
use crate::generators::{
    planted_no_steiner, sample, stable_instance_search, write_corpus_file, GenSpec, Model,
};
use crate::model::{tree_weight, Instance, SteinerTree};
use crate::solvers::{
    contract_solve, fan_greedy, mst_terminals, ContractConfig, ExactOracle, FuzzedExactOracle,
    InnerOracle, MstOracle,
};
use crate::stability::{certify, gamma_star, perturbed_margin};
use crate::stp::{format_number, parse_stp};
use crate::structure::{
    check_adjacent_edge_props, check_all, check_angle_lower, check_close2_iff, check_close_lemma,
    check_fan_lemma, check_far_lemma, check_nearest_neighbor_edge, check_steiner_degree_lower,
    check_steiner_degree_upper, LemmaId, LemmaReport,
};

/// Environment variable capping oracle wall time, in seconds.
pub const BUDGET_ENV: &str = "STEINER_BUDGET_SECS";

#[derive(Debug, Parser)]
#[command(
    name = "steiner-stability",
    version,
    about = "Stability analysis for Steiner tree instances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Exact,
    Dw,
    Mst,
    FanGreedy,
    Contract,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Exact,
    Mst,
    FuzzedExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Euclidean,
    Metric,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BudgetArgs {
    /// Largest Steiner subset the exact search may use.
    #[arg(long)]
    pub budget_steiner: Option<usize>,
    /// Largest number of candidate trees the exact search may examine.
    #[arg(long)]
    pub budget_trees: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance with the chosen algorithm.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Exact)]
        algorithm: Algorithm,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, value_enum, default_value_t = OracleKind::Exact)]
        oracle: OracleKind,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Compute the stability margin γ*.
    GammaStar {
        path: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Decide γ-stability; exit 1 with a witness when unstable.
    Certify {
        path: PathBuf,
        #[arg(long)]
        gamma: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Run the structural lemma checkers against the exact optimum.
    CheckLemmas {
        path: PathBuf,
        #[arg(long)]
        gamma: f64,
        /// Run a single lemma (degree-lower, nearest-neighbor, adjacent-edges,
        /// close, far, close-iff, fan, angle, degree-upper).
        #[arg(long)]
        lemma: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Generate instances into a corpus directory.
    Generate {
        #[arg(long, value_enum, default_value_t = ModelKind::Euclidean)]
        model: ModelKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Certified margin to reach by rejection sampling.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds to generate.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = crate::generators::DEFAULT_MAX_TRIES)]
        max_tries: usize,
        /// Place Steiner candidates away from all terminals.
        #[arg(long)]
        planted: bool,
        #[arg(long, default_value = "corpus")]
        out: PathBuf,
    },
}

/// Ordered `key value` report lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub entries: Vec<(String, String)>,
}

impl RunReport {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            match format {
                Format::Tsv => writeln!(out, "{k}\t{v}"),
                Format::Human => writeln!(out, "{k:>18}: {v}"),
            }
            .expect("writing to a String");
        }
        out
    }
}

/// Process exit status for an error.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded(_) | Error::SearchExhausted { .. } => 3,
        Error::OracleContractViolated { .. } => 4,
        _ => 2,
    }
}

fn budget(args: BudgetArgs) -> Result<EnumerationBudget> {
    let mut b = EnumerationBudget::default();
    if let Some(k) = args.budget_steiner {
        b = b.with_max_steiner_subset_size(k);
    }
    if let Some(m) = args.budget_trees {
        b = b.with_max_trees(m);
    }
    if let Ok(raw) = std::env::var(BUDGET_ENV) {
        let secs: f64 = raw
            .parse()
            .ok()
            .filter(|s: &f64| *s > 0.0 && s.is_finite())
            .ok_or_else(|| Error::InvalidParameter(format!("{BUDGET_ENV}={raw:?}")))?;
        b = b.with_deadline(Duration::from_secs_f64(secs));
    }
    b.check()?;
    Ok(b)
}

fn load(path: &Path, report: &mut RunReport) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let digest: String = Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    report.push("instance", path.display());
    report.push("sha256", digest);
    let inst = parse_stp(&text)?;
    report.push("vertices", inst.vertex_count());
    report.push("terminals", inst.terminals().len());
    Ok(inst)
}

fn gamma_text(g: f64) -> String {
    if g.is_infinite() {
        "inf".into()
    } else {
        format_number(g)
    }
}

fn push_tree(
    report: &mut RunReport,
    prefix: &str,
    inst: &Instance,
    tree: &SteinerTree,
) -> Result<()> {
    report.push(format!("{prefix}tree"), tree.to_one_based_string());
    report.push(
        format!("{prefix}weight"),
        format_number(tree_weight(inst, tree)?),
    );
    Ok(())
}

fn require_gamma(gamma: Option<f64>, algorithm: &str) -> Result<f64> {
    gamma.ok_or_else(|| Error::InvalidParameter(format!("--gamma is required for {algorithm}")))
}

/// Executes a parsed command line. Returns the report and the exit code;
/// errors are rendered into the report as an `error` line.
pub fn run(cli: &Cli) -> (RunReport, i32) {
    let started = Instant::now();
    let mut report = RunReport::default();
    report.push("command", command_name(&cli.command));
    let code = match dispatch(&cli.command, &mut report) {
        Ok(code) => code,
        Err(e) => {
            report.push("error", &e);
            exit_code_for(&e)
        }
    };
    report.push(
        "wall_time_s",
        format!("{:.3}", started.elapsed().as_secs_f64()),
    );
    report.push("exit", code);
    (report, code)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Solve { .. } => "solve",
        Command::GammaStar { .. } => "gamma-star",
        Command::Certify { .. } => "certify",
        Command::CheckLemmas { .. } => "check-lemmas",
        Command::Generate { .. } => "generate",
    }
}

fn dispatch(cmd: &Command, report: &mut RunReport) -> Result<i32> {
    match cmd {
        Command::Solve {
            path,
            algorithm,
            gamma,
            oracle,
            budget: b,
        } => cmd_solve(path, *algorithm, *gamma, *oracle, budget(*b)?, report),
        Command::GammaStar { path, budget: b } => {
            let b = budget(*b)?;
            let inst = load(path, report)?;
            let r = gamma_star(&inst, b)?;
            report.push("gamma_star", gamma_text(r.gamma_star));
            push_tree(report, "opt_", &inst, &r.opt)?;
            report.push(
                "witness",
                r.witness
                    .as_ref()
                    .map_or("none".into(), |w| w.to_one_based_string()),
            );
            report.push("opt_unique", r.opt_unique);
            report.push("exhaustive", r.exhaustive);
            Ok(0)
        }
        Command::Certify {
            path,
            gamma,
            budget: b,
        } => {
            let b = budget(*b)?;
            let inst = load(path, report)?;
            let c = certify(&inst, *gamma, b)?;
            report.push("gamma", format_number(*gamma));
            report.push("gamma_star", gamma_text(c.report.gamma_star));
            report.push("stable", c.stable);
            push_tree(report, "opt_", &inst, &c.report.opt)?;
            if let (Some(w), Some(p)) = (&c.witness, &c.perturbation) {
                report.push("witness", w.to_one_based_string());
                report.push(
                    "perturbed_margin",
                    format_number(perturbed_margin(&inst, p, &c.report.opt, w)?),
                );
            }
            report.push("exhaustive", c.report.exhaustive);
            Ok(if c.stable { 0 } else { 1 })
        }
        Command::CheckLemmas {
            path,
            gamma,
            lemma,
            budget: b,
        } => cmd_check_lemmas(path, *gamma, lemma.as_deref(), budget(*b)?, report),
        Command::Generate {
            model,
            n,
            t,
            dim,
            gamma,
            seed,
            count,
            max_tries,
            planted,
            out,
        } => {
            let model = match model {
                ModelKind::Euclidean => Model::Euclidean { dim: *dim },
                ModelKind::Metric => Model::RandomMetric,
            };
            for s in *seed..seed + count {
                let mut spec = GenSpec::euclidean(*dim, *n, *t, s).with_max_tries(*max_tries);
                spec.model = model;
                spec.target_gamma = *gamma;
                let (inst, cert) = if *planted {
                    let inst = planted_no_steiner(&spec)?;
                    let r = gamma_star(&inst, EnumerationBudget::default())?;
                    (inst, Some(r))
                } else if gamma.is_some() {
                    let (inst, r) = stable_instance_search(&spec)?;
                    (inst, Some(r))
                } else {
                    (sample(&spec)?, None)
                };
                let path = write_corpus_file(out, &spec, &inst, cert.as_ref())?;
                report.push("file", path.display());
                if let Some(r) = cert {
                    report.push("gamma_star", gamma_text(r.gamma_star));
                }
            }
            Ok(0)
        }
    }
}

fn cmd_solve(
    path: &Path,
    algorithm: Algorithm,
    gamma: Option<f64>,
    oracle: OracleKind,
    b: EnumerationBudget,
    report: &mut RunReport,
) -> Result<i32> {
    let inst = load(path, report)?;
    let name = algorithm
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    report.push("algorithm", &name);
    let tree = match algorithm {
        Algorithm::Exact => {
            let sol = brute_force_opt(&inst, b)?;
            report.push("unique", sol.unique);
            sol.tree
        }
        Algorithm::Dw => dreyfus_wagner(&inst)?.0,
        Algorithm::Mst => mst_terminals(&inst),
        Algorithm::FanGreedy => fan_greedy(&inst, require_gamma(gamma, &name)?)?,
        Algorithm::Contract => {
            let g = require_gamma(gamma, &name)?;
            let oracle: Box<dyn InnerOracle> = match oracle {
                OracleKind::Exact => Box::new(ExactOracle::default()),
                OracleKind::Mst => Box::new(MstOracle),
                OracleKind::FuzzedExact => Box::new(FuzzedExactOracle),
            };
            report.push("oracle", oracle.label());
            let config = ContractConfig {
                budget: b,
                ..ContractConfig::default()
            };
            let (tree, trace) = contract_solve(&inst, g, oracle.as_ref(), config)?;
            report.push("contractions", trace.steps.len());
            tree
        }
    };
    push_tree(report, "", &inst, &tree)?;
    if matches!(
        algorithm,
        Algorithm::Mst | Algorithm::FanGreedy | Algorithm::Contract
    ) {
        match brute_force_opt(&inst, b) {
            Ok(sol) => {
                report.push("exact_weight", format_number(sol.weight));
                report.push("matches_exact", tree == sol.tree);
            }
            Err(Error::BudgetExceeded(_)) => report.push("exact_check", "skipped (budget)"),
            Err(e) => return Err(e),
        }
    }
    Ok(0)
}

fn cmd_check_lemmas(
    path: &Path,
    gamma: f64,
    lemma: Option<&str>,
    b: EnumerationBudget,
    report: &mut RunReport,
) -> Result<i32> {
    let inst = load(path, report)?;
    let sol = brute_force_opt(&inst, b)?;
    report.push("gamma", format_number(gamma));
    report.push("opt_unique", sol.unique);
    let reports: Vec<LemmaReport> = match lemma {
        None => check_all(&inst, &sol.tree, gamma)?,
        Some(name) => {
            let id = LemmaId::from_name(name)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown lemma {name:?}")))?;
            let opt = &sol.tree;
            let single = match id {
                LemmaId::SteinerDegreeLower => check_steiner_degree_lower(&inst, opt, gamma),
                LemmaId::NearestNeighbor => check_nearest_neighbor_edge(&inst, opt),
                LemmaId::AdjacentEdges => check_adjacent_edge_props(&inst, opt, gamma),
                LemmaId::Close => check_close_lemma(&inst, opt, gamma),
                LemmaId::Far => check_far_lemma(&inst, opt, gamma),
                LemmaId::CloseIff => check_close2_iff(&inst, opt, gamma),
                LemmaId::Fan => check_fan_lemma(&inst, opt, gamma, &SteinerTree::new())?,
                LemmaId::AngleLower => match check_angle_lower(&inst, opt, gamma, false) {
                    Err(Error::MissingCoordinates) => {
                        report.push("lemma.angle", "not applicable (no coordinates)");
                        return Ok(0);
                    }
                    other => other?,
                },
                LemmaId::SteinerDegreeUpper => check_steiner_degree_upper(&inst, opt, gamma),
            };
            vec![single]
        }
    };
    let mut total = 0;
    for r in &reports {
        let value = if r.applicable {
            r.violations.len().to_string()
        } else {
            "not applicable".into()
        };
        report.push(format!("lemma.{}", r.lemma), value);
        total += r.violations.len();
    }
    report.push("violations", total);
    for r in &reports {
        for line in r.to_tsv().lines() {
            report.push("violation", line);
        }
    }
    Ok(if total == 0 { 0 } else { 1 })
}
