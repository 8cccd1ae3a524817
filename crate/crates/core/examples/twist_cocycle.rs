//! Lifts a cocycle table on the dual of an abelian subgroup, classifies it
//! and twists C(Q₃) into a non-cocommutative Kac algebra.
//!
//! Run with `cargo run --example twist_cocycle`.

use qhf::group::{abelian_dual_with_basis, build_family, Family};
use qhf::kac::{dual_idempotents, group_kac, verify_bundle};
use qhf::twist::{certify_twist, gauge_unitary, lift_cocycle, twist_bundle, CocycleTable};
use qhf::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn main() -> qhf::Result<()> {
    let tol = qhf::DEFAULT_TOL;
    let base = group_kac(build_family(Family::Quasiquaternion(3))?);
    let g = base.group().clone();
    let h = abelian_dual_with_basis(&g, &[g.find("b").expect("b")])?;
    let family = dual_idempotents(&base, &h);

    let table = CocycleTable::conjugate_symmetric(4, &[(1, 2, I), (2, 3, I), (3, 1, I)]);
    println!("ω counital {}, |ω| = 1 within {:.1e}", table.is_counital(tol), table.unit_deviation());
    let omega = lift_cocycle(&table, &family)?;
    let u = gauge_unitary(&omega, &base);
    let cert = certify_twist(&omega, &u, &base, tol);
    println!("cocycle class {:?}, coinvolutivity {:?}", cert.cocycle_class, cert.coinvolutivity_class);

    let twisted = twist_bundle(&base, &omega, &u, tol)?;
    let axioms = verify_bundle(&twisted, tol);
    println!("twisted bundle: {} axioms, all pass {}", axioms.len(), axioms.all_passed());
    println!("cocommutativity defect {:.3}", twisted.cocommutativity_defect());

    // A table that is not unitary is refused.
    let mut bad = table.clone();
    bad.set(1, 1, Complex64::new(2.0, 0.0));
    match lift_cocycle(&bad, &family).and_then(|o| twist_bundle(&base, &o, &u, tol)) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("refused: {e}"),
    }
    Ok(())
}
