//! Above (√17−1)/2 a Euclidean stable optimum uses no Steiner vertices, so
//! the terminal spanning tree is optimal. Sample such instances and compare.
//!
//! ```bash
//! cargo run --example mst_main_theorem
//! ```

use steiner_stability::exact::{brute_force_opt, EnumerationBudget};
use steiner_stability::generators::{stable_instance_search, GenSpec};
use steiner_stability::solvers::mst_terminals;
use steiner_stability::structure::{
    no_steiner_threshold, steiner_degree_lower_bound, steiner_degree_upper_bound,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = no_steiner_threshold();
    println!("threshold {g:.10}");
    // The upper bound only exists once γ > √2.
    for gamma in [1.45, 1.5, g] {
        println!(
            "  gamma {gamma:.4}: Steiner degree must exceed {:.3} and be at most {:.3}",
            steiner_degree_lower_bound(gamma),
            steiner_degree_upper_bound(gamma)
        );
    }
    for (dim, seed) in [(2, 1), (3, 2), (4, 3)] {
        let spec = GenSpec::euclidean(dim, 8, 3, seed)
            .with_target(g)
            .with_max_tries(50_000);
        let (inst, report) = stable_instance_search(&spec)?;
        let opt = brute_force_opt(&inst, EnumerationBudget::unlimited())?;
        let mst = mst_terminals(&inst);
        println!(
            "dim {dim}: gamma* {:.3}, OPT {}, terminal MST equal: {}",
            report.gamma_star,
            opt.tree.to_one_based_string(),
            mst == opt.tree
        );
    }
    Ok(())
}
