//! Structure constants of a commutative induced coproduct in its minimal
//! projections `p_k`, read as the convolution `δ_i * δ_j = Σ_k c_ijk δ_k` of
//! point masses, and the pushforward of functionals.
//!
//! Run with `cargo run --example dual_hypergroup`.

use qhf::catalog::{build_scenario, Params, RunOptions};
use qhf::hypergroup::{djs_property, dual_pushforward_residuals, minimal_projections, structure_constants};

fn main() -> qhf::Result<()> {
    for scenario in ["z6_delsart", "z6_orbital"] {
        let run = build_scenario(scenario, &Params::new(), &RunOptions::default())?;
        let h = &run.hypergroup;
        let projections = minimal_projections(h).expect("commutative");
        let sc = structure_constants(h, &projections, 1e-9)?;
        println!("{scenario}: dim B = {}", h.dim());
        for i in 0..sc.dim() {
            let row: Vec<String> = (0..sc.dim())
                .map(|j| {
                    let terms: Vec<String> = (0..sc.dim())
                        .filter(|&k| sc.get(i, j, k).norm() > 1e-12)
                        .map(|k| format!("{:.3}·p{k}", sc.get(i, j, k).re))
                        .collect();
                    terms.join(" + ")
                })
                .collect();
            println!("  δ{i} * (δ0..δ{}) = {}", sc.dim() - 1, row.join(" | "));
        }
        if let Some(djs) = djs_property(h, 1e-9) {
            println!("  nonnegative {}, neutral {:?}", djs.nonnegative, djs.neutral);
        }
        let (prod, inv) = dual_pushforward_residuals(&run.expectation, &run.bundle, h);
        println!("  pushforward residuals: product {prod:.3e}, involution {inv:.3e}");
    }
    Ok(())
}
