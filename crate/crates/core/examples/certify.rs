//! Certify γ-stability; for an unstable verdict, replay the adversary's
//! perturbation and watch the rival overtake the optimum.
//!
//! ```bash
//! cargo run --example certify
//! ```

use steiner_stability::exact::EnumerationBudget;
use steiner_stability::model::tree_weight;
use steiner_stability::stability::{apply_perturbation, certify};
use steiner_stability::{Instance, VertexId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = Instance::complete(
        vec![
            vec![0.0, 1.0, 2.9],
            vec![1.0, 0.0, 2.0],
            vec![2.9, 2.0, 0.0],
        ],
        &[VertexId(0), VertexId(1), VertexId(2)],
    )?;
    for gamma in [1.2, 1.4, 1.5, 2.0] {
        let cert = certify(&inst, gamma, EnumerationBudget::unlimited())?;
        print!("gamma {gamma}: stable = {}", cert.stable);
        if let (Some(rival), Some(p)) = (&cert.witness, &cert.perturbation) {
            let perturbed = apply_perturbation(&inst, p)?;
            print!(
                "; under the adversary OPT weighs {:.3}, rival {} weighs {:.3}",
                tree_weight(&perturbed, &cert.report.opt)?,
                rival.to_one_based_string(),
                tree_weight(&perturbed, rival)?,
            );
        }
        println!();
    }
    Ok(())
}
