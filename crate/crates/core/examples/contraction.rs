//! The contraction loop with three inner oracles: exact, an adversarial
//! exact solver that returns the runner-up whenever it may, and the terminal
//! MST, which breaks the approximation contract.
//!
//! ```bash
//! cargo run --example contraction
//! ```

use steiner_stability::exact::{brute_force_opt, EnumerationBudget};
use steiner_stability::generators::{stable_instance_search, GenSpec};
use steiner_stability::solvers::{
    contract_solve, ContractConfig, ExactOracle, FuzzedExactOracle, InnerOracle, MstOracle,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gamma = 1.2;
    // The first stable instance whose optimum uses a Steiner vertex.
    let (inst, report, opt) = (0..)
        .find_map(|seed| {
            let (inst, report) =
                stable_instance_search(&GenSpec::random_metric(9, 4, seed).with_target(gamma))
                    .ok()?;
            let opt = brute_force_opt(&inst, EnumerationBudget::unlimited()).ok()?;
            let uses_steiner = opt.tree.vertices().iter().any(|&v| !inst.is_terminal(v));
            uses_steiner.then_some((inst, report, opt))
        })
        .expect("some seed qualifies");
    println!(
        "gamma* {:.3}, OPT {} ({:.3})",
        report.gamma_star,
        opt.tree.to_one_based_string(),
        opt.weight
    );

    let oracles: [&dyn InnerOracle; 3] = [&ExactOracle::default(), &FuzzedExactOracle, &MstOracle];
    for oracle in oracles {
        match contract_solve(&inst, gamma, oracle, ContractConfig::default()) {
            Ok((tree, trace)) => {
                println!(
                    "{:>12}: {} after {} contractions, optimal: {}",
                    oracle.label(),
                    tree.to_one_based_string(),
                    trace.steps.len(),
                    tree == opt.tree
                );
                for step in &trace.steps {
                    println!(
                        "{:>12}  n={} eps={:.4} kept edge of weight {:.3}",
                        "", step.size_before, step.epsilon, step.weight
                    );
                }
            }
            Err(e) => println!("{:>12}: {e}", oracle.label()),
        }
    }
    Ok(())
}
