//! Builds the group families, a character table and an automorphism orbit
//! partition.
//!
//! Run with `cargo run --example group_tables`.

use qhf::group::{abelian_dual_with_basis, build_family, orbit_partition, Family, GroupAutomorphism};

fn main() -> qhf::Result<()> {
    for family in [
        Family::Cyclic(6),
        Family::Quasiquaternion(3),
        Family::Dihedral(4),
        Family::Symmetric(4),
        Family::Alternating(5),
        Family::Zm2Semidirect(3),
    ] {
        let g = build_family(family)?;
        let gens: Vec<&str> = g.generators().iter().map(|&x| g.label(x)).collect();
        println!("{:<6} order {:>3}  generators {:?}  abelian {}", g.name(), g.order(), gens, g.is_abelian());
    }

    // Characters of H = <b> in Q3, indexed by k with b ↦ i^k.
    let q3 = build_family(Family::Quasiquaternion(3))?;
    let b = q3.find("b").expect("generator b");
    let h = abelian_dual_with_basis(&q3, &[b])?;
    for (chi, row) in h.character_table().iter().enumerate() {
        let values: Vec<String> = row.iter().map(|z| format!("{:+.0}{:+.0}i", z.re, z.im)).collect();
        println!("χ{chi} ({}): {}", h.dual_label(chi), values.join(" "));
    }

    // Orbits of a ↦ a³ on D_8.
    let d = build_family(Family::Dihedral(4))?;
    let (a, b) = (d.find("a").expect("a"), d.find("b").expect("b"));
    let gamma = GroupAutomorphism::from_images(&d, &[a, b], &[d.pow(a, 3), b])?;
    let orbits = orbit_partition(&d, &[gamma]);
    let labelled: Vec<Vec<&str>> = orbits.blocks().iter().map(|o| o.iter().map(|&x| d.label(x)).collect()).collect();
    println!("{} orbits of a ↦ a^3: {:?}", orbits.len(), labelled);
    Ok(())
}
