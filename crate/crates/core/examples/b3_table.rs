//! Expands the Q₃ hypergroup coproduct in the f basis and compares it with
//! the transcribed table term by term.
//!
//! Run with `cargo run --release --example b3_table`.

use qhf::catalog::{build_scenario, compare_b3_table, f_basis_table, render_expansion, Params, RunOptions, B3_LABELS};

fn main() -> qhf::Result<()> {
    let run = build_scenario("quasiquaternion", &Params::new(), &RunOptions::default())?;
    let cmp = compare_b3_table(&run.hypergroup)?;
    println!("alignment {:?}", cmp.alignment);
    println!("{} of {} terms differ, max residual {:.1e}", cmp.mismatched_terms, cmp.total_terms, cmp.max_residual);
    let (_, sc) = f_basis_table(&run.hypergroup)?;
    let labels: Vec<String> = B3_LABELS.iter().map(|s| s.to_string()).collect();
    for k in [5, 6] {
        println!("Δ̃({}) = {}", labels[k], render_expansion(&sc, k, &labels, 1e-12));
    }
    Ok(())
}
