//! Parse a sparse STP graph, complete it by metric closure, and write it
//! back in canonical form.
//!
//! ```bash
//! cargo run --example stp_roundtrip
//! ```

use steiner_stability::stp::{parse_stp, parse_stp_document, write_stp};

const SPARSE: &str = "33D32945 STP File, STP Format Version 1.0

SECTION Comment
Name \"path with a shortcut\"
END

SECTION Graph
Nodes 4
Edges 4
E 1 2 1.5
E 2 3 2
E 3 4 1
E 1 4 10
END

SECTION Terminals
Terminals 2
T 1
T 4
END

EOF
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = parse_stp_document(SPARSE)?;
    for note in &doc.notes {
        println!("note: {note}");
    }
    let text = write_stp(&doc.instance);
    print!("{text}");
    assert_eq!(write_stp(&parse_stp(&text)?), text);
    println!("round trip is stable");
    Ok(())
}
