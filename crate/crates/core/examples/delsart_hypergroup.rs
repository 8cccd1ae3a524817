//! Averages the twisted C(S₄) over conjugation by (12) and verifies the
//! induced quantum hypergroup.
//!
//! Run with `cargo run --release --example delsart_hypergroup`.

use qhf::group::{abelian_dual_with_basis, build_family, Family, GroupAutomorphism};
use qhf::hypergroup::{delsart_expectation, induced_coproduct, symmetry_witness, verify_hypergroup, DEFAULT_CP_LIMIT};
use qhf::kac::{dual_idempotents, group_kac};
use qhf::twist::{admissible_automorphism, gauge_unitary, lift_cocycle, twist_bundle, CocycleTable};
use qhf::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn main() -> qhf::Result<()> {
    let tol = qhf::DEFAULT_TOL;
    let base = group_kac(build_family(Family::Symmetric(4))?);
    let g = base.group().clone();
    let (t12, t34) = (g.find("2134").expect("(12)"), g.find("1243").expect("(34)"));
    let family = dual_idempotents(&base, &abelian_dual_with_basis(&g, &[t12, t34])?);
    let table = CocycleTable::conjugate_symmetric(4, &[(2, 1, I), (1, 3, I), (3, 2, I)]);
    let omega = lift_cocycle(&table, &family)?;
    let twisted = twist_bundle(&base, &omega, &gauge_unitary(&omega, &base), tol)?;

    let gamma = admissible_automorphism(&GroupAutomorphism::inner(&g, t12), &twisted, tol);
    println!("route {:?}", gamma.route());
    let p = delsart_expectation(&twisted, &[gamma], tol)?;
    println!("P audit passes {}", p.audit(&twisted, tol).all_passed());

    let h = induced_coproduct(&p, &twisted, false, tol)?;
    let mut blocks = h.block_sizes();
    blocks.sort_unstable();
    println!("dim B = {}, blocks {:?}", h.dim(), blocks);
    let axioms = verify_hypergroup(&h, tol, DEFAULT_CP_LIMIT);
    for c in axioms.checks() {
        println!("  {:<28} {:?} {:.1e}", c.name, c.status, c.residual);
    }
    if let Some(w) = symmetry_witness(&h, tol) {
        println!("Δ̃ is not symmetric: defect {:.3} at P(λ({}))", w.defect, w.label);
    }
    Ok(())
}
