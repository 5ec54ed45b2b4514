//! Write a small reproducible corpus of stable instances with provenance.
//!
//! ```bash
//! cargo run --example generate_corpus -- /tmp/corpus
//! ```

use std::path::PathBuf;

use steiner_stability::generators::{stable_instance_search, write_corpus_file, GenSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("steiner-corpus"));
    let specs = (0..3).flat_map(|seed| {
        [
            GenSpec::euclidean(2, 7, 3, seed).with_target(1.4),
            GenSpec::euclidean(3, 7, 3, seed).with_target(1.4),
            GenSpec::random_metric(7, 3, seed).with_target(1.6),
        ]
    });
    for spec in specs {
        let (inst, report) = stable_instance_search(&spec)?;
        let path = write_corpus_file(&root, &spec, &inst, Some(&report))?;
        println!("{} (gamma* {:.4})", path.display(), report.gamma_star);
    }
    Ok(())
}
