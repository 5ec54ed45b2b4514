//! Terminal MST over the optimum on an equilateral triangle with its Fermat
//! point, and the packing bound on Steiner-vertex neighbourhoods.
//!
//! ```bash
//! cargo run --example steiner_ratio
//! ```

use steiner_stability::exact::EnumerationBudget;
use steiner_stability::model::euclidean_instance;
use steiner_stability::structure::{angle_threshold, max_packing_count, steiner_ratio};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = 3f64.sqrt() / 2.0;
    let inst = euclidean_instance(
        &[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, h],
            vec![0.5, h / 3.0],
        ],
        &[true, true, true, false],
    )?;
    let ratio = steiner_ratio(&inst, EnumerationBudget::unlimited())?;
    println!(
        "Steiner ratio {ratio:.12} (2/sqrt3 = {:.12})",
        2.0 / 3f64.sqrt()
    );

    for gamma in [1.42, 1.5, 1.6, 1.7, 1.8] {
        let theta = angle_threshold(gamma);
        println!(
            "gamma {gamma}: neighbours of a Steiner vertex are more than {:.2} deg apart; at most {} fit",
            theta.to_degrees(),
            max_packing_count(theta)?
        );
    }
    Ok(())
}
