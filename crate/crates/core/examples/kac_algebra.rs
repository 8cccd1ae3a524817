//! The cocommutative Kac algebra C(G) and the axiom verifier.
//!
//! Run with `cargo run --example kac_algebra`.

use qhf::group::{abelian_dual_with_basis, build_family, Family};
use qhf::kac::{dual_idempotents, group_kac, verify_bundle};
use qhf::linalg::AlgebraElement;

fn main() -> qhf::Result<()> {
    let bundle = group_kac(build_family(Family::Dihedral(3))?);
    let g = bundle.group().clone();
    let report = verify_bundle(&bundle, qhf::DEFAULT_TOL);
    for c in report.checks() {
        println!("{:<16} {:?} {:.1e}", c.name, c.status, c.residual);
    }
    println!("cocommutativity defect {:.1e}", bundle.cocommutativity_defect());

    let a = AlgebraElement::lambda(&g, g.find("a").expect("a"));
    let k = bundle.kappa(&a);
    let image = k.nonzeros().next().expect("basis element").0;
    println!("ε(λa) = {}, μ(λa) = {}, κ(λa) = λ({})", bundle.counit(&a), bundle.haar(&a), g.label(image));

    let h = abelian_dual_with_basis(&g, &[g.find("b").expect("b")])?;
    let family = dual_idempotents(&bundle, &h);
    println!("idempotents of C(H), |H| = {}: audit passes {}", family.len(), family.audit(&bundle, 1e-9).all_passed());
    Ok(())
}
