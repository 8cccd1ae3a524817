//! Orbital expectations on C(Z₆): one whose kernel is a coideal and one
//! whose kernel is not.
//!
//! Run with `cargo run --example orbital_expectation`.

use qhf::group::{abelian_dual_with_basis, build_family, Family, Partition};
use qhf::hypergroup::{check_expectation_hypotheses, orbital_expectation};
use qhf::kac::{dual_idempotents, group_kac};

fn main() -> qhf::Result<()> {
    let tol = qhf::DEFAULT_TOL;
    let base = group_kac(build_family(Family::Cyclic(6))?);
    let g = base.group().clone();
    let points = dual_idempotents(&base, &abelian_dual_with_basis(&g, &[g.find("a").expect("a")])?);
    for blocks in [vec![vec![0], vec![1, 5], vec![2, 4], vec![3]], vec![vec![0], vec![1, 2], vec![3], vec![4, 5]]] {
        let weights: Vec<Vec<f64>> = blocks.iter().map(|b| vec![1.0 / b.len() as f64; b.len()]).collect();
        let partition = Partition::new(blocks.clone(), 6)?;
        let p = orbital_expectation(&base, &points, &partition, &weights, tol)?;
        let hyp = check_expectation_hypotheses(&p, &base, tol);
        let failed: Vec<&str> = hyp.failures().map(|c| c.name.as_str()).collect();
        println!("{blocks:?}: dim B = {}, failed hypotheses {failed:?}", p.dim());
    }
    Ok(())
}
