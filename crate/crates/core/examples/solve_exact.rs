//! Solve a small instance with both exact oracles and show the runner-up.
//!
//! ```bash
//! cargo run --example solve_exact
//! ```

use steiner_stability::exact::{brute_force_opt, dreyfus_wagner, EnumerationBudget};
use steiner_stability::generators::{sample, GenSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = sample(&GenSpec::random_metric(8, 4, 3))?;
    println!(
        "{} vertices, terminals {:?}",
        inst.vertex_count(),
        inst.terminals().iter().map(|t| t.0 + 1).collect::<Vec<_>>()
    );

    let bf = brute_force_opt(&inst, EnumerationBudget::unlimited())?;
    println!(
        "subset search : {} (weight {:.4}, unique {})",
        bf.tree.to_one_based_string(),
        bf.weight,
        bf.unique
    );
    if let Some((tree, w)) = &bf.runner_up {
        println!(
            "runner-up     : {} (weight {w:.4})",
            tree.to_one_based_string()
        );
    }

    let (tree, w) = dreyfus_wagner(&inst)?;
    println!(
        "dreyfus-wagner: {} (weight {w:.4})",
        tree.to_one_based_string()
    );
    Ok(())
}
