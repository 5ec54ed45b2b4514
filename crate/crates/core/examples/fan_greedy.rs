//! Grow a tree by terminal edges and terminal component fans. Above γ = 1.755
//! a Steiner vertex in a stable optimum needs degree at least 9, so the
//! showcase is an irregular 11-spoke star with a decoy Steiner vertex.
//!
//! ```bash
//! cargo run --example fan_greedy
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steiner_stability::exact::{brute_force_opt, EnumerationBudget};
use steiner_stability::generators::{stable_instance_search, GenSpec};
use steiner_stability::model::tree_weight;
use steiner_stability::solvers::{fan_greedy, mst_terminals};
use steiner_stability::stability::gamma_star;
use steiner_stability::{Instance, VertexId};

/// Terminals `0..k`, hub `k`, decoy `k+1`; terminal distances run through
/// the hub, so the weights form a metric.
fn spoked_star(k: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spokes: Vec<f64> = (0..k).map(|_| rng.gen_range(0.995..1.005)).collect();
    let n = k + 2;
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            w[i][j] = match (i, j) {
                _ if i == j => 0.0,
                _ if i == k + 1 || j == k + 1 => 3.0,
                _ if i == k => spokes[j],
                _ if j == k => spokes[i],
                _ => spokes[i] + spokes[j],
            };
        }
    }
    Instance::complete(w, &(0..k).map(VertexId).collect::<Vec<_>>()).expect("metric star")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let star = spoked_star(11, 7);
    let report = gamma_star(&star, EnumerationBudget::unlimited())?;
    let grown = fan_greedy(&star, 1.8)?;
    println!(
        "star: gamma* {:.4}; fan growth {} (weight {:.3}); terminal MST weight {:.3}; optimal: {}",
        report.gamma_star,
        grown.to_one_based_string(),
        tree_weight(&star, &grown)?,
        tree_weight(&star, &mst_terminals(&star))?,
        grown == report.opt,
    );

    let mut matched = 0;
    for seed in 0..20 {
        let (inst, _) =
            stable_instance_search(&GenSpec::random_metric(7, 3, seed).with_target(1.8))?;
        let opt = brute_force_opt(&inst, EnumerationBudget::unlimited())?.tree;
        if fan_greedy(&inst, 1.8)? == opt {
            matched += 1;
        }
    }
    println!("random 1.8-stable metrics: {matched}/20 optima recovered");
    Ok(())
}
