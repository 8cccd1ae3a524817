//! Kac structures on `C(G)`: the cocommutative bundle, dual idempotents of an
//! abelian subgroup, and an axiom verifier for arbitrary bundles.
//!
//! The star is always derived as `⋆(a) = κ(a)*`; the modular data of the
//! general theory is trivial here.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{AbelianSubgroup, FiniteGroup};
use crate::linalg::{dense, AlgebraElement, LinearMap, Space, TensorElement, TripleTensor};
use crate::report::CheckReport;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

type SparseColumns = Vec<Vec<(usize, Complex64)>>;

fn sparse_columns(m: &DMatrix<Complex64>) -> SparseColumns {
    (0..m.ncols())
        .map(|j| {
            m.column(j)
                .iter()
                .copied()
                .enumerate()
                .filter(|(_, c)| *c != ZERO)
                .collect()
        })
        .collect()
}

/// Data recorded when a bundle was obtained by twisting another.
#[derive(Clone, Debug)]
pub struct TwistData {
    pub base: KacBundle,
    pub omega: TensorElement,
    pub gauge: AlgebraElement,
}

#[derive(Clone, Debug)]
pub struct KacBundle {
    group: Arc<FiniteGroup>,
    coproduct: LinearMap,
    counit: LinearMap,
    coinvolution: LinearMap,
    haar: LinearMap,
    delta_cols: SparseColumns,
    kappa_cols: SparseColumns,
    twist: Option<Arc<TwistData>>,
}

/// `(C(G), Δ, ε, κ, μ)` with `Δ(λg) = λg⊗λg`, `ε(λg) = 1`, `κ(λg) = λ(g⁻¹)`
/// and `μ(λg) = δ_{g,e}`.
pub fn group_kac(group: impl Into<Arc<FiniteGroup>>) -> KacBundle {
    let group = group.into();
    let n = group.order();
    let a = Space::algebra(n);
    let aa = Space::Tensor { order: n, rank: 2 };
    let coproduct = LinearMap::from_columns(a, aa, |g| {
        let mut c = vec![ZERO; n * n];
        c[g * n + g] = ONE;
        c
    });
    let counit = LinearMap::from_columns(a, Space::Scalar, |_| vec![ONE]);
    let coinvolution = LinearMap::from_columns(a, a, |g| {
        let mut c = vec![ZERO; n];
        c[group.inv(g)] = ONE;
        c
    });
    let haar = LinearMap::from_columns(a, Space::Scalar, |g| vec![if g == 0 { ONE } else { ZERO }]);
    KacBundle::from_parts(group, coproduct, counit, coinvolution, haar)
        .expect("shapes are consistent by construction")
}

impl KacBundle {
    /// Assembles a bundle from explicit maps without checking any axiom; run
    /// [`verify_bundle`] on the result.
    pub fn from_parts(
        group: Arc<FiniteGroup>,
        coproduct: LinearMap,
        counit: LinearMap,
        coinvolution: LinearMap,
        haar: LinearMap,
    ) -> Result<Self> {
        let n = group.order();
        let a = Space::algebra(n);
        let shapes = [
            (&coproduct, a, Space::Tensor { order: n, rank: 2 }, "coproduct"),
            (&counit, a, Space::Scalar, "counit"),
            (&coinvolution, a, a, "coinvolution"),
            (&haar, a, Space::Scalar, "haar state"),
        ];
        for (m, dom, cod, name) in shapes {
            if m.domain() != dom || m.codomain() != cod {
                return Err(Error::DimensionMismatch(format!("{name} has the wrong shape")));
            }
        }
        Ok(KacBundle {
            delta_cols: sparse_columns(coproduct.matrix()),
            kappa_cols: sparse_columns(coinvolution.matrix()),
            group,
            coproduct,
            counit,
            coinvolution,
            haar,
            twist: None,
        })
    }

    pub(crate) fn with_twist(mut self, data: TwistData) -> Self {
        self.twist = Some(Arc::new(data));
        self
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn coproduct_map(&self) -> &LinearMap {
        &self.coproduct
    }

    pub fn counit_map(&self) -> &LinearMap {
        &self.counit
    }

    pub fn coinvolution_map(&self) -> &LinearMap {
        &self.coinvolution
    }

    pub fn haar_map(&self) -> &LinearMap {
        &self.haar
    }

    pub fn twist(&self) -> Option<&TwistData> {
        self.twist.as_deref()
    }

    /// The twisting unitary, `1⊗1` for an untwisted bundle.
    pub fn omega(&self) -> TensorElement {
        self.twist().map_or_else(|| TensorElement::one(&self.group), |t| t.omega.clone())
    }

    /// The gauge unitary `u`, `1` for an untwisted bundle.
    pub fn gauge(&self) -> AlgebraElement {
        self.twist().map_or_else(|| AlgebraElement::one(&self.group), |t| t.gauge.clone())
    }

    pub fn coproduct_basis(&self, g: usize) -> TensorElement {
        let mut t = TensorElement::zero(&self.group);
        for &(k, c) in &self.delta_cols[g] {
            t.coeffs_mut()[k] = c;
        }
        t
    }

    pub fn coproduct(&self, a: &AlgebraElement) -> TensorElement {
        let mut t = TensorElement::zero(&self.group);
        let out = t.coeffs_mut();
        for (g, x) in a.nonzeros() {
            for &(k, c) in &self.delta_cols[g] {
                out[k] += x * c;
            }
        }
        t
    }

    pub fn counit(&self, a: &AlgebraElement) -> Complex64 {
        self.counit.apply_functional(a)
    }

    pub fn haar(&self, a: &AlgebraElement) -> Complex64 {
        self.haar.apply_functional(a)
    }

    pub fn kappa(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut t = AlgebraElement::zero(&self.group);
        let out = t.coeffs_mut();
        for (g, x) in a.nonzeros() {
            for &(k, c) in &self.kappa_cols[g] {
                out[k] += x * c;
            }
        }
        t
    }

    /// `⋆(a) = κ(a)*`, antilinear.
    pub fn star(&self, a: &AlgebraElement) -> AlgebraElement {
        self.kappa(a).adjoint()
    }

    /// `(Δ⊗id)(x)`.
    pub fn coproduct_left(&self, x: &TensorElement) -> TripleTensor {
        let n = self.order();
        let mut t = TripleTensor::zero(&self.group);
        let out = t.coeffs_mut();
        for (k, v) in x.nonzeros() {
            let (g, y) = (k / n, k % n);
            for &(r, c) in &self.delta_cols[g] {
                out[r * n + y] += v * c;
            }
        }
        t
    }

    /// `(id⊗Δ)(x)`.
    pub fn coproduct_right(&self, x: &TensorElement) -> TripleTensor {
        let n = self.order();
        let mut t = TripleTensor::zero(&self.group);
        let out = t.coeffs_mut();
        for (k, v) in x.nonzeros() {
            let (g, y) = (k / n, k % n);
            for &(r, c) in &self.delta_cols[y] {
                out[g * n * n + r] += v * c;
            }
        }
        t
    }

    /// `(κ⊗κ)(x)`.
    pub fn kappa_tensor(&self, x: &TensorElement) -> TensorElement {
        let n = self.order();
        let mut t = TensorElement::zero(&self.group);
        let out = t.coeffs_mut();
        for (k, v) in x.nonzeros() {
            for &(a, ca) in &self.kappa_cols[k / n] {
                for &(b, cb) in &self.kappa_cols[k % n] {
                    out[a * n + b] += v * ca * cb;
                }
            }
        }
        t
    }

    /// `(⋆⊗⋆)(x) = ((κ⊗κ)x)*`.
    pub fn star_tensor(&self, x: &TensorElement) -> TensorElement {
        self.kappa_tensor(x).adjoint()
    }

    /// `(id⊗κ)(x)`.
    pub fn kappa_right(&self, x: &TensorElement) -> TensorElement {
        let n = self.order();
        let mut t = TensorElement::zero(&self.group);
        let out = t.coeffs_mut();
        for (k, v) in x.nonzeros() {
            for &(b, cb) in &self.kappa_cols[k % n] {
                out[(k / n) * n + b] += v * cb;
            }
        }
        t
    }

    /// `Δ(λs)` for the group generators; these generate `Δ(A)`.
    pub fn coproduct_generators(&self) -> Vec<TensorElement> {
        self.group.generators().iter().map(|&s| self.coproduct_basis(s)).collect()
    }

    /// `(Δ⊗id)Δ(λs)` for the group generators.
    pub fn double_coproduct_generators(&self) -> Vec<TripleTensor> {
        self.group
            .generators()
            .iter()
            .map(|&s| self.coproduct_left(&self.coproduct_basis(s)))
            .collect()
    }

    /// `max_g ‖ΣΔ(λg) − Δ(λg)‖∞`.
    pub fn cocommutativity_defect(&self) -> f64 {
        (0..self.order())
            .map(|g| {
                let d = self.coproduct_basis(g);
                d.flip().distance(&d)
            })
            .fold(0.0, f64::max)
    }

    /// Row vector of `μ` on the group basis.
    pub fn haar_vector(&self) -> Vec<Complex64> {
        self.haar.matrix().row(0).iter().copied().collect()
    }

    /// Row vector of `ε` on the group basis.
    pub fn counit_vector(&self) -> Vec<Complex64> {
        self.counit.matrix().row(0).iter().copied().collect()
    }
}

/// Projections `P_χ = |H|⁻¹ Σ_h ⟨χ,h⟩ λ(h)`, one per character.
#[derive(Clone, Debug)]
pub struct IdempotentFamily {
    subgroup: AbelianSubgroup,
    projections: Vec<AlgebraElement>,
}

impl IdempotentFamily {
    pub fn subgroup(&self) -> &AbelianSubgroup {
        &self.subgroup
    }

    pub fn projections(&self) -> &[AlgebraElement] {
        &self.projections
    }

    pub fn get(&self, chi: usize) -> &AlgebraElement {
        &self.projections[chi]
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    /// Residuals of the defining identities of the family.
    pub fn audit(&self, bundle: &KacBundle, tol: f64) -> CheckReport {
        let g = bundle.group();
        let h = &self.subgroup;
        let k = self.len();
        let mut r = CheckReport::new();
        let mut orth: f64 = 0.0;
        for x in 0..k {
            for y in 0..k {
                let p = self.get(x) * self.get(y);
                let want = if x == y { self.get(x).clone() } else { AlgebraElement::zero(g) };
                orth = orth.max(p.distance(&want));
            }
        }
        r.residual("orthogonality", orth, tol);
        let sum = self.projections.iter().fold(AlgebraElement::zero(g), |acc, p| &acc + p);
        r.residual("partition_of_unity", sum.distance(&AlgebraElement::one(g)), tol);
        let mut expand: f64 = 0.0;
        for (j, &hj) in h.elements().iter().enumerate() {
            let mut s = AlgebraElement::zero(g);
            for x in 0..k {
                s += &self.get(x).scale(h.character(x, j).conj());
            }
            expand = expand.max(s.distance(&AlgebraElement::lambda(g, hj)));
        }
        r.residual("group_expansion", expand, tol);
        let mut cop: f64 = 0.0;
        let mut kap: f64 = 0.0;
        for x in 0..k {
            let mut want = TensorElement::zero(g);
            for y in 0..k {
                let z = h.dual_mul(h.dual_inv(y), x);
                want += &self.get(y).tensor(self.get(z));
            }
            cop = cop.max(bundle.coproduct(self.get(x)).distance(&want));
            kap = kap.max(bundle.kappa(self.get(x)).distance(self.get(h.dual_inv(x))));
        }
        r.residual("coproduct", cop, tol);
        r.residual("coinvolution", kap, tol);
        r
    }
}

pub fn dual_idempotents(bundle: &KacBundle, h: &AbelianSubgroup) -> IdempotentFamily {
    let g = bundle.group();
    let scale = 1.0 / h.order() as f64;
    let projections = (0..h.order())
        .map(|chi| {
            let mut p = AlgebraElement::zero(g);
            for (j, &x) in h.elements().iter().enumerate() {
                p.coeffs_mut()[x] = h.character(chi, j) * scale;
            }
            p
        })
        .collect();
    IdempotentFamily { subgroup: h.clone(), projections }
}

/// Checks every Kac axiom on the group basis and records residuals.
pub fn verify_bundle(bundle: &KacBundle, tol: f64) -> CheckReport {
    let g = bundle.group().clone();
    let n = g.order();
    let gens = g.generators().to_vec();
    let lam = |x: usize| AlgebraElement::lambda(&g, x);
    let deltas: Vec<TensorElement> = (0..n).map(|x| bundle.coproduct_basis(x)).collect();
    let eps = bundle.counit_vector();
    let mu = bundle.haar_vector();
    let mut r = CheckReport::new();

    r.timed("coassociativity", tol, || {
        deltas
            .iter()
            .map(|d| bundle.coproduct_left(d).distance(&bundle.coproduct_right(d)))
            .fold(0.0, f64::max)
    });

    r.timed("counit", tol, || {
        let mut worst: f64 = 0.0;
        for (x, d) in deltas.iter().enumerate() {
            let mut left = vec![ZERO; n];
            let mut right = vec![ZERO; n];
            for (k, c) in d.nonzeros() {
                left[k % n] += eps[k / n] * c;
                right[k / n] += eps[k % n] * c;
            }
            for y in 0..n {
                let want = if y == x { ONE } else { ZERO };
                worst = worst.max((left[y] - want).norm()).max((right[y] - want).norm());
            }
        }
        worst
    });

    r.timed("star_coproduct", tol, || {
        (0..n)
            .map(|x| {
                let lhs = bundle.coproduct(&bundle.star(&lam(x)));
                let rhs = bundle.star_tensor(&deltas[x]).flip();
                lhs.distance(&rhs)
            })
            .fold(0.0, f64::max)
    });

    r.timed("star_involutive", tol, || {
        (0..n).map(|x| bundle.star(&bundle.star(&lam(x))).distance(&lam(x))).fold(0.0, f64::max)
    });

    r.timed("coproduct_multiplicative", tol, || {
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for &s in &gens {
                let lhs = &deltas[g.mul(x, s)];
                worst = worst.max(lhs.distance(&(&deltas[x] * &deltas[s])));
            }
        }
        worst
    });

    r.timed("coproduct_unital", tol, || deltas[0].distance(&TensorElement::one(&g)));

    r.timed("coproduct_adjoint", tol, || {
        (0..n).map(|x| deltas[g.inv(x)].distance(&deltas[x].adjoint())).fold(0.0, f64::max)
    });

    r.timed("counit_multiplicative", tol, || {
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for y in 0..n {
                worst = worst.max((eps[g.mul(x, y)] - eps[x] * eps[y]).norm());
            }
        }
        worst
    });

    r.timed("counit_unital", tol, || (eps[0] - ONE).norm());

    r.timed("star_multiplicative", tol, || {
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for &s in &gens {
                let lhs = bundle.star(&lam(g.mul(x, s)));
                let rhs = &bundle.star(&lam(x)) * &bundle.star(&lam(s));
                worst = worst.max(lhs.distance(&rhs));
            }
        }
        worst
    });

    r.timed("star_adjoint_commute", tol, || {
        (0..n)
            .map(|x| bundle.star(&lam(x).adjoint()).distance(&bundle.star(&lam(x)).adjoint()))
            .fold(0.0, f64::max)
    });

    r.timed("coinvolution_antimultiplicative", tol, || {
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for &s in &gens {
                let lhs = bundle.kappa(&lam(g.mul(x, s)));
                let rhs = &bundle.kappa(&lam(s)) * &bundle.kappa(&lam(x));
                worst = worst.max(lhs.distance(&rhs));
            }
        }
        worst
    });

    r.timed("coinvolution_involutive", tol, || {
        (0..n).map(|x| bundle.kappa(&bundle.kappa(&lam(x))).distance(&lam(x))).fold(0.0, f64::max)
    });

    r.timed("coinvolution_unital", tol, || bundle.kappa(&lam(0)).distance(&lam(0)));

    r.timed("coinvolution_counit", tol, || {
        (0..n).map(|x| (bundle.counit(&bundle.kappa(&lam(x))) - eps[x]).norm()).fold(0.0, f64::max)
    });

    r.timed("coinvolution_haar", tol, || {
        (0..n).map(|x| (bundle.haar(&bundle.kappa(&lam(x))) - mu[x]).norm()).fold(0.0, f64::max)
    });

    r.timed("haar_state", tol, || (mu[0] - ONE).norm());

    r.timed("haar_invariance", tol, || {
        let mut worst: f64 = 0.0;
        for (x, d) in deltas.iter().enumerate() {
            let mut left = vec![ZERO; n];
            let mut right = vec![ZERO; n];
            for (k, c) in d.nonzeros() {
                left[k % n] += mu[k / n] * c;
                right[k / n] += mu[k % n] * c;
            }
            for y in 0..n {
                let want = if y == 0 { mu[x] } else { ZERO };
                worst = worst.max((left[y] - want).norm()).max((right[y] - want).norm());
            }
        }
        worst
    });

    r.timed("haar_strong_invariance", tol, || strong_invariance_residual(bundle, &deltas, &mu));

    // Gram matrix μ(λ(i)*λ(j)); the residual column records λ_min.
    let gram = DMatrix::from_fn(n, n, |i, j| mu[g.mul(g.inv(i), j)]);
    let min = dense::min_eigenvalue(&gram);
    r.flag("haar_faithful", min > tol * n as f64, min, None);
    r
}

/// `max ‖(id⊗μ)((κ⊗id)Δ(a)(1⊗b)) − κ((id⊗μ)((1⊗a)Δ(b)))‖∞` over basis pairs,
/// the strong left invariance of `μ`.
fn strong_invariance_residual(bundle: &KacBundle, deltas: &[TensorElement], mu: &[Complex64]) -> f64 {
    let g = bundle.group();
    let n = g.order();
    let mu_nz: Vec<(usize, Complex64)> =
        mu.iter().copied().enumerate().filter(|(_, c)| *c != ZERO).collect();
    // rhs[(a·n + b)·n + x]: coefficient of λx in (id⊗μ)((1⊗λa)Δ(λb)).
    let mut rhs = vec![ZERO; n * n * n];
    for (b, d) in deltas.iter().enumerate() {
        for (k, c) in d.nonzeros() {
            let (x, y) = (k / n, k % n);
            for &(m, cm) in &mu_nz {
                let a = g.mul(m, g.inv(y));
                rhs[(a * n + b) * n + x] += c * cm;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (a, d) in deltas.iter().enumerate() {
        // w[b][x]: coefficient of λx before κ in the left-hand side.
        let mut w = vec![ZERO; n * n];
        for (k, c) in d.nonzeros() {
            let (x, y) = (k / n, k % n);
            for &(m, cm) in &mu_nz {
                let b = g.mul(g.inv(y), m);
                w[b * n + x] += c * cm;
            }
        }
        for b in 0..n {
            let lhs = AlgebraElement::from_coeffs(g, w[b * n..(b + 1) * n].to_vec()).expect("length");
            let lhs = bundle.kappa(&lhs);
            let r = &rhs[(a * n + b) * n..(a * n + b + 1) * n];
            for (l, r) in lhs.coeffs().iter().zip(r) {
                worst = worst.max((l - r).norm());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{abelian_dual_with_basis, build_family, Family};

    fn bundle(f: Family) -> KacBundle {
        group_kac(build_family(f).unwrap())
    }

    #[test]
    fn group_bundle_passes_everything() {
        let b = bundle(Family::Quasiquaternion(3));
        let r = verify_bundle(&b, 1e-12);
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.checks().iter().all(|c| c.name == "haar_faithful" || c.residual < 1e-12));
        assert_eq!(b.cocommutativity_defect(), 0.0);
    }

    #[test]
    fn haar_is_identity_coefficient() {
        let b = bundle(Family::Dihedral(3));
        let g = b.group().clone();
        let a = &AlgebraElement::lambda(&g, 0).scale(Complex64::new(2.5, -1.0))
            + &AlgebraElement::lambda(&g, 4);
        assert_eq!(b.haar(&a), Complex64::new(2.5, -1.0));
        let d = b.coproduct_basis(4);
        assert_eq!(d.get([4, 4]), ONE);
    }

    #[test]
    fn identity_coinvolution_breaks_strong_invariance() {
        let b = bundle(Family::Quasiquaternion(3));
        let n = b.order();
        let bad = KacBundle::from_parts(
            b.group().clone(),
            b.coproduct_map().clone(),
            b.counit_map().clone(),
            LinearMap::identity(Space::algebra(n)),
            b.haar_map().clone(),
        )
        .unwrap();
        let r = verify_bundle(&bad, 1e-9);
        assert!(r.failed("haar_strong_invariance"));
    }

    #[test]
    fn idempotents_in_quasiquaternion() {
        let b = bundle(Family::Quasiquaternion(3));
        let g = b.group().clone();
        let h = abelian_dual_with_basis(&g, &[g.find("b").unwrap()]).unwrap();
        let fam = dual_idempotents(&b, &h);
        let p0 = fam.get(0);
        for &x in h.elements() {
            assert_eq!(p0.coeffs()[x], Complex64::new(0.25, 0.0));
        }
        let audit = fam.audit(&b, 1e-12);
        assert!(audit.all_passed(), "{audit:?}");
    }

    #[test]
    fn idempotents_in_dihedral() {
        let b = bundle(Family::Dihedral(4));
        let g = b.group().clone();
        let h = abelian_dual_with_basis(&g, &[g.find("a^4").unwrap(), g.find("b").unwrap()]).unwrap();
        assert!(dual_idempotents(&b, &h).audit(&b, 1e-12).all_passed());
    }

    #[test]
    fn trivial_subgroup_gives_unit() {
        let b = bundle(Family::Cyclic(5));
        let h = crate::group::abelian_dual(b.group(), &[0]).unwrap();
        let fam = dual_idempotents(&b, &h);
        assert_eq!(fam.len(), 1);
        assert!(fam.get(0).approx_eq(&AlgebraElement::one(b.group()), 0.0));
    }
}
