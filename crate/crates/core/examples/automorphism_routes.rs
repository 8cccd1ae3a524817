//! Certifies group automorphisms as automorphisms of twisted bundles and
//! shows which route succeeded.
//!
//! Run with `cargo run --example automorphism_routes`.

use qhf::catalog::{build_scenario, Params, RunOptions};

fn main() -> qhf::Result<()> {
    let opts = RunOptions::default();
    for (scenario, params) in [
        ("dihedral", vec![("n", "4"), ("p", "3")]),
        ("quasiquaternion", vec![("n", "3")]),
        ("alternating", vec![("n", "4")]),
        ("alternating", vec![("n", "5")]),
    ] {
        let params: Params = params.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let run = build_scenario(scenario, &params, &opts)?;
        let route = run.report.computed.route.clone().unwrap_or_default();
        let failed: Vec<String> = run
            .report
            .diagnostics
            .failures()
            .filter(|c| c.name.starts_with("gamma0."))
            .map(|c| format!("{} {:.3}", c.name, c.residual))
            .collect();
        println!("{scenario} {params:?}: route {route}");
        for f in failed {
            println!("    unmet: {f}");
        }
    }
    Ok(())
}
