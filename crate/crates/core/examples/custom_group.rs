//! Verifies a group given as a JSON multiplication table.
//!
//! Run with `cargo run --example custom_group`.

use qhf::catalog::{verify_group, RunOptions};
use qhf::group::FiniteGroup;

fn main() -> qhf::Result<()> {
    // Klein four-group.
    let text = r#"{"order": 4, "mul": [[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]], "labels": ["e","x","y","xy"]}"#;
    let report = verify_group(FiniteGroup::from_json(text)?, &RunOptions::default());
    println!("{} checks, passed {}", report.checks.len(), report.passed());

    // Not associative: rejected before any algebra is built.
    let bad = r#"{"order": 3, "mul": [[0,1,2],[1,0,2],[2,2,0]]}"#;
    if let Err(e) = FiniteGroup::from_json(bad) {
        println!("rejected: {e}");
    }
    Ok(())
}
