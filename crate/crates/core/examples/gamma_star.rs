//! Stability margins of a few hand-made instances, by parametric search and
//! by brute-force enumeration of every canonical tree.
//!
//! ```bash
//! cargo run --example gamma_star
//! ```

use steiner_stability::exact::EnumerationBudget;
use steiner_stability::stability::{gamma_star, gamma_star_by_enumeration};
use steiner_stability::{Instance, VertexId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let triangle = Instance::complete(
        vec![
            vec![0.0, 1.0, 2.9],
            vec![1.0, 0.0, 2.0],
            vec![2.9, 2.0, 0.0],
        ],
        &[VertexId(0), VertexId(1), VertexId(2)],
    )?;
    let star = Instance::complete(
        vec![
            vec![0.0, 2.0, 2.0, 1.0],
            vec![2.0, 0.0, 2.0, 1.0],
            vec![2.0, 2.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ],
        &[VertexId(0), VertexId(1), VertexId(2)],
    )?;

    for (name, inst) in [("triangle", &triangle), ("star", &star)] {
        let fast = gamma_star(inst, EnumerationBudget::unlimited())?;
        let slow = gamma_star_by_enumeration(inst, EnumerationBudget::unlimited())?;
        println!(
            "{name:>8}: gamma* = {:.12} (enumeration {:.12}), OPT {}, witness {}",
            fast.gamma_star,
            slow.gamma_star,
            fast.opt.to_one_based_string(),
            fast.witness
                .map(|w| w.to_one_based_string())
                .unwrap_or_default(),
        );
    }
    Ok(())
}
