//! Run every structural checker on a stable instance, then on the same
//! instance at a γ it does not satisfy.
//!
//! ```bash
//! cargo run --example check_lemmas
//! ```

use steiner_stability::exact::{brute_force_opt, EnumerationBudget};
use steiner_stability::generators::{stable_instance_search, GenSpec};
use steiner_stability::structure::check_all;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (inst, report) = stable_instance_search(&GenSpec::random_metric(7, 3, 1).with_target(1.8))?;
    let opt = brute_force_opt(&inst, EnumerationBudget::unlimited())?.tree;
    println!(
        "gamma* = {:.4}, OPT {}",
        report.gamma_star,
        opt.to_one_based_string()
    );

    for gamma in [1.8, report.gamma_star + 0.3] {
        println!("-- gamma {gamma:.4}");
        for r in check_all(&inst, &opt, gamma)? {
            let verdict = match (r.applicable, r.passed()) {
                (false, _) => "n/a".to_string(),
                (true, true) => "ok".to_string(),
                (true, false) => format!("{} violation(s)", r.violations.len()),
            };
            println!("{:>16}: {verdict}", r.lemma.name());
            for v in r.violations.iter().take(2) {
                let tuple: Vec<usize> = v.tuple.iter().map(|x| x.0 + 1).collect();
                println!(
                    "{:>16}  clause {} at {tuple:?}: {:.3} vs {:.3} {}",
                    "", v.clause, v.lhs, v.rhs, v.detail
                );
            }
        }
    }
    Ok(())
}
