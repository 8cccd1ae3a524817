//! Property tests for the module invariants.

use std::sync::Arc;

use proptest::prelude::*;
use qhf::catalog::{build_scenario, export_report, Format, Params, RunOptions};
use qhf::group::{
    abelian_dual_with_basis, build_family, orbit_partition, Family, FiniteGroup, GroupAutomorphism,
};
use qhf::hypergroup::{
    check_expectation_hypotheses, delsart_expectation, haar_solutions, induced_coproduct,
    strong_invariance_residual, verify_hypergroup,
};
use qhf::kac::{dual_idempotents, group_kac, verify_bundle, KacBundle};
use qhf::linalg::{in_commutant, is_positive, regular_matrix, wedderburn, AlgebraElement, TensorElement};
use qhf::twist::{
    admissible_automorphism, classify_cocycle, gauge_transform, gauge_unitary, lift_cocycle, twist_bundle,
    verify_automorphism, CocycleTable,
};
use qhf::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);
const TOL: f64 = 1e-9;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (1usize..=12).prop_map(Family::Cyclic),
        (2usize..=5).prop_map(Family::Quasiquaternion),
        (2usize..=6).prop_map(Family::Dihedral),
        Just(Family::Symmetric(4)),
        Just(Family::Alternating(4)),
        (3usize..=4).prop_map(Family::Zm2Semidirect),
    ]
}

fn small_family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (2usize..=8).prop_map(Family::Cyclic),
        (2usize..=3).prop_map(Family::Quasiquaternion),
        (2usize..=3).prop_map(Family::Dihedral),
        Just(Family::Zm2Semidirect(3)),
    ]
}

fn element(g: &Arc<FiniteGroup>, values: &[(f64, f64)]) -> AlgebraElement {
    let coeffs = (0..g.order()).map(|k| {
        let (re, im) = values[k % values.len()];
        Complex64::new(re, im)
    });
    AlgebraElement::from_coeffs(g, coeffs.collect()).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..32)
}

/// The quasiquaternion twist, the twisted bundle and the gauged `b ↦ b³`.
fn twisted_qn(n: usize) -> (KacBundle, KacBundle, TensorElement, AlgebraElement) {
    let base = group_kac(build_family(Family::Quasiquaternion(n)).unwrap());
    let g = base.group().clone();
    let h = abelian_dual_with_basis(&g, &[g.find("b").unwrap()]).unwrap();
    let fam = dual_idempotents(&base, &h);
    let table = CocycleTable::conjugate_symmetric(4, &[(1, 2, I), (2, 3, I), (3, 1, I)]);
    let omega = lift_cocycle(&table, &fam).unwrap();
    let u = gauge_unitary(&omega, &base);
    let twisted = twist_bundle(&base, &omega, &u, TOL).unwrap();
    (base, twisted, omega, u)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    // group-core

    #[test]
    fn families_are_associative(f in family()) {
        let g = build_family(f).unwrap();
        let n = g.order();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn characters_are_orthogonal(n in 1usize..=12) {
        let g = build_family(Family::Cyclic(n)).unwrap();
        let h = abelian_dual_with_basis(&g, g.generators()).unwrap();
        let t = h.character_table();
        for (i, ri) in t.iter().enumerate() {
            for (j, rj) in t.iter().enumerate() {
                let s: Complex64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                let want = if i == j { n as f64 } else { 0.0 };
                let exact = ri.iter().chain(rj).all(|z| (z.re.abs() < 1e-15 || z.im.abs() < 1e-15) && (z.norm() - 1.0).abs() < 1e-15);
                let tol = if exact { 1e-14 } else { 1e-12 };
                prop_assert!((s - want).norm() <= tol * n as f64);
            }
        }
    }

    #[test]
    fn orbit_count_ignores_generating_set(n in 3usize..=12, p in 1usize..24) {
        let g = build_family(Family::Dihedral(n)).unwrap();
        let m = 2 * n;
        let p = p % m;
        prop_assume!(p > 0 && gcd(p, m) == 1);
        let (a, b) = (g.find("a").unwrap(), g.find("b").unwrap());
        let gamma = GroupAutomorphism::from_images(&g, &[a, b], &[g.pow(a, p), b]).unwrap();
        let k = gamma.order();
        // Any power coprime to the order generates the same cyclic group.
        let other = (1..=k).rev().find(|j| gcd(*j, k) == 1).unwrap();
        let mut power = GroupAutomorphism::identity(&g);
        for _ in 0..other {
            power = power.compose(&gamma);
        }
        let one = orbit_partition(&g, std::slice::from_ref(&gamma)).len();
        let two = orbit_partition(&g, &[power.clone(), gamma.compose(&gamma)]).len();
        let three = orbit_partition(&g, &[power]).len();
        prop_assert_eq!(one, two);
        prop_assert_eq!(one, three);
    }

    // linalg-tensor

    #[test]
    fn convolution_bounds_and_regular_matrix(f in small_family(), x in coeffs(), y in coeffs()) {
        let g = Arc::new(build_family(f).unwrap());
        let a = element(&g, &x);
        let b = element(&g, &y);
        let ab = a.checked_mul(&b).unwrap();
        prop_assert!(ab.norm_inf() <= g.order() as f64 * a.norm_inf() * b.norm_inf() + 1e-12);
        let lhs = regular_matrix(&ab);
        let rhs = regular_matrix(&a) * regular_matrix(&b);
        prop_assert!((lhs - rhs).camax() <= 1e-9);
    }

    #[test]
    fn adjoint_is_an_involution(f in small_family(), x in coeffs()) {
        let g = Arc::new(build_family(f).unwrap());
        let a = element(&g, &x);
        let back = a.adjoint().adjoint();
        prop_assert_eq!(back.coeffs(), a.coeffs());
        prop_assert!((regular_matrix(&a.adjoint()) - regular_matrix(&a).adjoint()).camax() == 0.0);
    }

    #[test]
    fn squares_are_positive(f in small_family(), x in coeffs()) {
        let g = Arc::new(build_family(f).unwrap());
        let c = element(&g, &x);
        let p = c.adjoint().checked_mul(&c).unwrap();
        prop_assert!(is_positive(&p, 1e-9));
        // Gram check: the regular representation of c*c is PSD.
        let m = regular_matrix(&p);
        let eig = qhf::linalg::dense::min_eigenvalue(&m);
        prop_assert!(eig >= -1e-9);
        // A negative multiple of a nonzero square is not positive.
        if p.norm_inf() > 1e-6 {
            prop_assert!(!is_positive(&p.scale(Complex64::new(-1.0, 0.0)), 1e-9));
        }
    }

    #[test]
    fn wedderburn_is_deterministic_with_exact_dimension(f in small_family()) {
        let g = Arc::new(build_family(f).unwrap());
        let basis: Vec<AlgebraElement> = (0..g.order()).map(|x| AlgebraElement::lambda(&g, x)).collect();
        let one = wedderburn(&basis, 1e-9).unwrap();
        let two = wedderburn(&basis, 1e-9).unwrap();
        prop_assert_eq!(&one.sizes, &two.sizes);
        prop_assert_eq!(one.dimension(), g.order());
    }

    // kac-core

    #[test]
    fn group_kac_is_cocommutative_with_invariant_states(f in family()) {
        let b = group_kac(build_family(f).unwrap());
        prop_assert_eq!(b.cocommutativity_defect(), 0.0);
        kappa_invariance(&b)?;
    }

    #[test]
    fn haar_solution_matches_mu(f in small_family()) {
        let b = group_kac(build_family(f).unwrap());
        let p = delsart_expectation(&b, &[], TOL).unwrap();
        let h = induced_coproduct(&p, &b, false, TOL).unwrap();
        let sols = haar_solutions(&h);
        prop_assert_eq!(sols.ncols(), 1);
        let col = sols.column(0);
        let scale = col.dot(h.unit_coords());
        let xi = col / scale;
        prop_assert!((xi - h.haar_coords()).camax() <= 1e-9);
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn kappa_invariance(b: &KacBundle) -> Result<(), TestCaseError> {
    let g = b.group().clone();
    for x in 0..g.order() {
        let l = AlgebraElement::lambda(&g, x);
        let k = b.kappa(&l);
        prop_assert!((b.haar(&k) - b.haar(&l)).norm() <= TOL);
        prop_assert!((b.counit(&k) - b.counit(&l)).norm() <= TOL);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    // twist

    #[test]
    fn lifted_omega_commutes_with_the_subgroup(n in 2usize..=5) {
        let (base, _, omega, _) = twisted_qn(n);
        let g = base.group().clone();
        let b = g.find("b").unwrap();
        let h: Vec<TensorElement> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| AlgebraElement::lambda(&g, g.pow(b, i)).tensor(&AlgebraElement::lambda(&g, g.pow(b, j))))
            .collect();
        prop_assert!(in_commutant(&omega, &h, 1e-12));
    }

    #[test]
    fn twisting_preserves_counit_and_haar(n in 2usize..=5) {
        let (_, twisted, _, _) = twisted_qn(n);
        let r = verify_bundle(&twisted, TOL);
        prop_assert!(r.all_passed(), "{:?}", r.failures().map(|c| c.name.clone()).collect::<Vec<_>>());
        kappa_invariance(&twisted)?;
    }

    #[test]
    fn gauge_transform_keeps_the_class(n in 2usize..=5) {
        let (base, _, omega, u) = twisted_qn(n);
        let gauged = gauge_transform(&omega, &u, &base);
        let before = classify_cocycle(&omega, &base, TOL).class;
        let after = classify_cocycle(&gauged, &base, TOL).class;
        prop_assert_eq!(before, after);
    }

    #[test]
    fn gauge_robustness_of_the_twisted_bundle(n in 2usize..=5) {
        let (base, _, omega, u) = twisted_qn(n);
        let gauged = gauge_transform(&omega, &u, &base);
        let u2 = gauge_unitary(&gauged, &base);
        let plain = verify_bundle(&twist_bundle(&base, &omega, &u, TOL).unwrap(), TOL).all_passed();
        let moved = twist_bundle(&base, &gauged, &u2, TOL).map(|t| verify_bundle(&t, TOL).all_passed());
        prop_assert_eq!(Some(plain), moved.ok());
    }

    #[test]
    fn certified_automorphisms_satisfy_every_property(n in 2usize..=5) {
        let (_, twisted, _, _) = twisted_qn(n);
        let g = twisted.group().clone();
        let (a, b) = (g.find("a").unwrap(), g.find("b").unwrap());
        let alpha = GroupAutomorphism::from_images(&g, &[a, b], &[a, g.pow(b, 3)]).unwrap();
        let gamma = admissible_automorphism(&alpha, &twisted, TOL);
        prop_assert!(gamma.certified());
        prop_assert!(verify_automorphism(gamma.map(), &twisted, TOL).all_passed());
    }

    // hypergroup-builder

    #[test]
    fn delsart_expectations_are_audited_hypergroups(n in 2usize..=5) {
        let (_, twisted, _, _) = twisted_qn(n);
        let g = twisted.group().clone();
        let (a, b) = (g.find("a").unwrap(), g.find("b").unwrap());
        let alpha = GroupAutomorphism::from_images(&g, &[a, b], &[a, g.pow(b, 3)]).unwrap();
        let gamma = admissible_automorphism(&alpha, &twisted, TOL);
        let p = delsart_expectation(&twisted, &[gamma], TOL).unwrap();
        prop_assert!(p.audit(&twisted, TOL).all_passed());
        prop_assert!(check_expectation_hypotheses(&p, &twisted, TOL).all_passed());
        let h = induced_coproduct(&p, &twisted, false, TOL).unwrap();
        let v = verify_hypergroup(&h, TOL, 24);
        prop_assert!(v.passed("counit") && v.passed("star_coproduct"));
        prop_assert!(strong_invariance_residual(&h) <= TOL);
    }

    #[test]
    fn orbit_count_equals_dim_b_for_basis_permuting_gamma(n in 3usize..=8, p in 1usize..16) {
        let b = group_kac(build_family(Family::Dihedral(n)).unwrap());
        let g = b.group().clone();
        let m = 2 * n;
        let p = p % m;
        prop_assume!(p > 0 && gcd(p, m) == 1);
        let (a, bb) = (g.find("a").unwrap(), g.find("b").unwrap());
        let alpha = GroupAutomorphism::from_images(&g, &[a, bb], &[g.pow(a, p), bb]).unwrap();
        let gamma = admissible_automorphism(&alpha, &b, TOL);
        prop_assert!(gamma.permutes_basis(TOL));
        let e = delsart_expectation(&b, &[gamma], TOL).unwrap();
        prop_assert_eq!(e.dim(), orbit_partition(&g, &[alpha]).len());
    }

    // catalog-cli

    #[test]
    fn reports_are_deterministic(which in 0usize..4) {
        let (name, params): (&str, Vec<(&str, &str)>) = [
            ("quasiquaternion", vec![("n", "3")]),
            ("dihedral", vec![("n", "4"), ("p", "3")]),
            ("z6_orbital", vec![]),
            ("zm2", vec![("m", "3"), ("r", "2")]),
        ][which].clone();
        let params: Params = params.into_iter().map(|(k, v)| (k.into(), v.into())).collect();
        let opts = RunOptions::default();
        let one = export_report(&build_scenario(name, &params, &opts).unwrap().report, Format::Json).unwrap();
        let two = export_report(&build_scenario(name, &params, &opts).unwrap().report, Format::Json).unwrap();
        prop_assert_eq!(one, two);
    }
}
