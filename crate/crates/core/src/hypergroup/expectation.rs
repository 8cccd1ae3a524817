//! Conditional expectations `P: A → B` onto unital `*`-subalgebras, their
//! three constructions, and the hypotheses under which `(P⊗P)Δ` is a
//! quantum-hypergroup coproduct on `B`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Partition};
use crate::kac::{group_kac, IdempotentFamily, KacBundle};
use crate::linalg::dense::{max_abs, null_space};
use crate::linalg::{is_positive, AlgebraElement, CMatrix, CVector, LinearMap, Space, TensorElement};
use crate::report::CheckReport;
use crate::twist::BundleAutomorphism;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Vectors whose `μ`-norm falls below this are dropped from the range basis.
const RANK_TOL: f64 = 1e-7;

/// Largest averaging group accepted by the Delsart construction.
pub const MAX_CLOSURE: usize = 4096;

/// How a conditional expectation was built.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    /// Average over a finite group `Γ` of bundle automorphisms; `certified` is
    /// false only for the explicit unchecked study path.
    Delsart { group_order: usize, certified: bool },
    /// `P = πˡ∘πʳ` for a Hopf epimorphism onto the named quotient bundle.
    DoubleCoset { quotient: String },
    /// Block averages on the point set of a commutative bundle.
    Orbital { partition: Partition, weights: Vec<Vec<f64>> },
}

impl Provenance {
    pub fn kind(&self) -> &'static str {
        match self {
            Provenance::Delsart { .. } => "delsart",
            Provenance::DoubleCoset { .. } => "double_coset",
            Provenance::Orbital { .. } => "orbital",
        }
    }
}

/// An idempotent map `P` on `C(G)` with a `μ`-orthonormal basis of its range.
///
/// The basis is Gram–Schmidt over `⟨a,b⟩ = μ(a*b)` applied to `P(λ(g))` in
/// increasing `g`, so coordinates are reproducible.
#[derive(Clone, Debug)]
pub struct ConditionalExpectation {
    group: Arc<FiniteGroup>,
    map: LinearMap,
    /// `n×d`, column `k` is the coefficient vector of `e_k`.
    basis: CMatrix,
    /// `d×n`, `coords(a) = coord·a` for `a ∈ B`.
    coord: CMatrix,
    pivots: Vec<usize>,
    provenance: Provenance,
    construction: CheckReport,
}

/// `M[g,h] = μ(λ(g)*λ(h))`.
pub(crate) fn mu_gram(bundle: &KacBundle) -> CMatrix {
    let g = bundle.group();
    let mu = bundle.haar_vector();
    CMatrix::from_fn(g.order(), g.order(), |x, y| mu[g.mul(g.inv(x), y)])
}

/// Row-major `n×n` matrix of a rank-2 tensor: entry `(x,y)` is the
/// coefficient of `λx⊗λy`.
pub(crate) fn tensor_matrix(t: &TensorElement) -> CMatrix {
    let n = t.group().order();
    CMatrix::from_row_slice(n, n, t.coeffs())
}

pub(crate) fn element(group: &Arc<FiniteGroup>, v: &CVector) -> AlgebraElement {
    AlgebraElement::from_coeffs(group, v.as_slice().to_vec()).expect("length matches group")
}

pub(crate) fn vector(a: &AlgebraElement) -> CVector {
    CVector::from_column_slice(a.coeffs())
}

impl ConditionalExpectation {
    /// Wraps an arbitrary map; the expectation properties are not checked
    /// here, run [`ConditionalExpectation::audit`].
    pub fn new(
        bundle: &KacBundle,
        map: LinearMap,
        provenance: Provenance,
        construction: CheckReport,
    ) -> Result<Self> {
        let n = bundle.order();
        let a = Space::algebra(n);
        if map.domain() != a || map.codomain() != a {
            return Err(Error::DimensionMismatch("expectation must be an endomorphism of C(G)".into()));
        }
        let gram = mu_gram(bundle);
        let inner = |x: &CVector, y: &CVector| (x.adjoint() * &gram * y)[(0, 0)];
        let mut q: Vec<CVector> = Vec::new();
        let mut pivots = Vec::new();
        for g in 0..n {
            let mut w = map.as_vector(g);
            for _ in 0..2 {
                for b in &q {
                    let c = inner(b, &w);
                    w.axpy(-c, b, ONE);
                }
            }
            let norm = inner(&w, &w).re.max(0.0).sqrt();
            if norm > RANK_TOL {
                q.push(w.unscale(norm));
                pivots.push(g);
            }
        }
        let basis = CMatrix::from_columns(&q);
        let coord = basis.adjoint() * &gram;
        Ok(ConditionalExpectation {
            group: bundle.group().clone(),
            map,
            basis,
            coord,
            pivots,
            provenance,
            construction,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn matrix(&self) -> &CMatrix {
        self.map.matrix()
    }

    /// `dim B`.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis_matrix(&self) -> &CMatrix {
        &self.basis
    }

    pub fn coord_matrix(&self) -> &CMatrix {
        &self.coord
    }

    pub fn range_basis(&self) -> Vec<AlgebraElement> {
        (0..self.dim()).map(|k| element(&self.group, &self.basis.column(k).into_owned())).collect()
    }

    /// Group indices whose images started a new basis vector.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Construction-specific checks (closure, intertwining, weights).
    pub fn construction(&self) -> &CheckReport {
        &self.construction
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        self.map.apply(a)
    }

    /// Coordinates of `a` in the range basis; exact when `a ∈ B`.
    pub fn coords(&self, a: &AlgebraElement) -> CVector {
        &self.coord * vector(a)
    }

    /// `(P⊗P)(x)` for a rank-2 tensor given as a matrix.
    pub(crate) fn both_legs(&self, x: &CMatrix) -> CMatrix {
        let p = self.matrix();
        p * x * p.transpose()
    }

    /// Residuals of the defining properties: idempotent, unital, `μ∘P = μ`,
    /// positive on the family `(1 + c λg)*(1 + c λg)` for `c ∈ {1, i}`, and the
    /// one-sided bimodule identities `P(ba) = bP(a)`, `P(ab) = P(a)b`.
    pub fn audit(&self, bundle: &KacBundle, tol: f64) -> CheckReport {
        let g = self.group.clone();
        let n = g.order();
        let p = self.matrix();
        let mut r = CheckReport::new();
        r.timed("idempotent", tol, || max_abs(&(p * p - p)));
        r.timed("unital", tol, || {
            self.apply(&AlgebraElement::one(&g)).distance(&AlgebraElement::one(&g))
        });
        r.timed("haar_invariant", tol, || {
            let mu = CMatrix::from_row_slice(1, n, &bundle.haar_vector());
            max_abs(&(&mu * p - &mu))
        });
        let one = AlgebraElement::one(&g);
        let mut positive = true;
        'outer: for x in 1..n {
            for c in [ONE, Complex64::new(0.0, 1.0)] {
                let y = &one + &AlgebraElement::lambda(&g, x).scale(c);
                if !is_positive(&self.apply(&(&y.adjoint() * &y)), tol) {
                    positive = false;
                    break 'outer;
                }
            }
        }
        r.flag("positive", positive, 0.0, None);
        r.timed("bimodule", tol, || {
            let images: Vec<AlgebraElement> =
                (0..n).map(|x| self.apply(&AlgebraElement::lambda(&g, x))).collect();
            let mut worst: f64 = 0.0;
            for b in self.range_basis() {
                for (x, px) in images.iter().enumerate() {
                    let a = AlgebraElement::lambda(&g, x);
                    worst = worst.max(self.apply(&(&b * &a)).distance(&(&b * px)));
                    worst = worst.max(self.apply(&(&a * &b)).distance(&(px * &b)));
                }
            }
            worst
        });
        r
    }
}

/// Averages of basis-permuting maps have one range vector per orbit.
fn orbit_count(maps: &[CMatrix], n: usize, tol: f64) -> Option<usize> {
    let mut perms = Vec::with_capacity(maps.len());
    for m in maps {
        let mut perm = vec![0; n];
        for (j, slot) in perm.iter_mut().enumerate() {
            let big: Vec<(usize, Complex64)> =
                m.column(j).iter().copied().enumerate().filter(|(_, c)| c.norm() > tol).collect();
            if big.len() != 1 || (big[0].1 - ONE).norm() > tol {
                return None;
            }
            *slot = big[0].0;
        }
        perms.push(perm);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for p in &perms {
                if !seen[p[x]] {
                    seen[p[x]] = true;
                    stack.push(p[x]);
                }
            }
        }
    }
    Some(count)
}

/// Closure of a set of invertible matrices under composition, identity
/// first, deduplicated entrywise within `1e-8`.
fn matrix_closure(gens: &[CMatrix], n: usize) -> Result<Vec<CMatrix>> {
    let mut out = vec![CMatrix::identity(n, n)];
    let mut i = 0;
    while i < out.len() {
        for s in gens {
            let next = &out[i] * s;
            if !out.iter().any(|m| max_abs(&(m - &next)) <= 1e-8) {
                if out.len() >= MAX_CLOSURE {
                    return Err(Error::ExpectationRefused(format!(
                        "averaging group exceeds {MAX_CLOSURE} elements"
                    )));
                }
                out.push(next);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// `P = |Γ|⁻¹ Σ_γ γ` over the group generated by certified automorphisms.
/// An empty generator list gives `Γ = {id}` and `P = id`.
pub fn delsart_expectation(
    bundle: &KacBundle,
    gens: &[BundleAutomorphism],
    tol: f64,
) -> Result<ConditionalExpectation> {
    if let Some(bad) = gens.iter().find(|g| !g.certified()) {
        let failed: Vec<&str> = bad.residuals().failures().map(|c| c.name.as_str()).collect();
        return Err(Error::ExpectationRefused(format!(
            "automorphism is not certified for this bundle (failed: {})",
            if failed.is_empty() { "no route attempted".to_string() } else { failed.join(", ") }
        )));
    }
    let maps: Vec<LinearMap> = gens.iter().map(|g| g.map().clone()).collect();
    delsart_build(bundle, &maps, true, tol)
}

/// Same average for arbitrary maps, without certification. Exists for
/// studying maps that fail certification; the provenance records it.
pub fn delsart_expectation_unchecked(
    bundle: &KacBundle,
    maps: &[LinearMap],
    tol: f64,
) -> Result<ConditionalExpectation> {
    delsart_build(bundle, maps, false, tol)
}

fn delsart_build(
    bundle: &KacBundle,
    maps: &[LinearMap],
    certified: bool,
    tol: f64,
) -> Result<ConditionalExpectation> {
    let n = bundle.order();
    let a = Space::algebra(n);
    for m in maps {
        if m.domain() != a || m.codomain() != a {
            return Err(Error::DimensionMismatch("automorphism acts on a different algebra".into()));
        }
    }
    let gens: Vec<CMatrix> = maps.iter().map(|m| m.matrix().clone()).collect();
    let group = matrix_closure(&gens, n)?;
    let mut avg = CMatrix::zeros(n, n);
    for m in &group {
        avg += m;
    }
    avg.unscale_mut(group.len() as f64);
    let map = LinearMap::new(a, a, avg)?;
    let e = ConditionalExpectation::new(
        bundle,
        map,
        Provenance::Delsart { group_order: group.len(), certified },
        CheckReport::new(),
    )?;
    let mut construction = CheckReport::new();
    construction.flag("averaging_group_order", true, group.len() as f64, None);
    match orbit_count(&group, n, tol) {
        Some(orbits) => construction.flag(
            "orbit_count",
            orbits == e.dim(),
            orbits as f64,
            Some(format!("{orbits} orbits, dim B = {}", e.dim())),
        ),
        None => construction.skip("orbit_count", "averaging group does not permute the group basis"),
    }
    Ok(ConditionalExpectation { construction, ..e })
}

/// The Hopf epimorphism `λ(g) ↦ λ(gN)` onto the group bundle of `G/N`.
pub fn quotient_epimorphism(bundle: &KacBundle, normal: &[usize]) -> Result<(KacBundle, LinearMap)> {
    let (q, coset) = bundle.group().quotient(normal)?;
    let m = q.order();
    let pi = LinearMap::from_columns(Space::algebra(bundle.order()), Space::algebra(m), |g| {
        let mut c = vec![ZERO; m];
        c[coset[g]] = ONE;
        c
    });
    Ok((group_kac(q), pi))
}

/// `P = πˡ∘πʳ` with `πˡ = (μ₂∘π⊗id)∘Δ₁` and `πʳ = (id⊗μ₂∘π)∘Δ₁`, after
/// verifying that `π` is a unital `*`-homomorphism intertwining coproducts,
/// counits and coinvolutions.
pub fn double_coset_expectation(
    bundle1: &KacBundle,
    bundle2: &KacBundle,
    pi: &LinearMap,
    tol: f64,
) -> Result<ConditionalExpectation> {
    let g1 = bundle1.group().clone();
    let g2 = bundle2.group().clone();
    let (n1, n2) = (g1.order(), g2.order());
    if pi.domain() != Space::algebra(n1) || pi.codomain() != Space::algebra(n2) {
        return Err(Error::DimensionMismatch("π must map C(G₁) to C(G₂)".into()));
    }
    let pm = pi.matrix();
    let image = |v: &CVector| element(&g2, &(pm * v));
    let lam1 = |x: usize| AlgebraElement::lambda(&g1, x);
    let deltas: Vec<CMatrix> = (0..n1).map(|x| tensor_matrix(&bundle1.coproduct_basis(x))).collect();

    let mut checks = CheckReport::new();
    let mut cop: f64 = 0.0;
    let mut kap: f64 = 0.0;
    let mut adj: f64 = 0.0;
    let mut mul: f64 = 0.0;
    for x in 0..n1 {
        let lhs = pm * &deltas[x] * pm.transpose();
        let px = image(&vector(&lam1(x)));
        let rhs = tensor_matrix(&bundle2.coproduct(&px));
        cop = cop.max(max_abs(&(lhs - rhs)));
        let k = image(&vector(&bundle1.kappa(&lam1(x))));
        kap = kap.max(k.distance(&bundle2.kappa(&px)));
        adj = adj.max(image(&vector(&lam1(g1.inv(x)))).distance(&px.adjoint()));
        for &s in g1.generators() {
            let lhs = image(&vector(&lam1(g1.mul(x, s))));
            let ps = image(&vector(&lam1(s)));
            mul = mul.max(lhs.distance(&(&px * &ps)));
        }
    }
    let eps1 = CMatrix::from_row_slice(1, n1, &bundle1.counit_vector());
    let eps2 = CMatrix::from_row_slice(1, n2, &bundle2.counit_vector());
    let unit = image(&vector(&lam1(0))).distance(&AlgebraElement::one(&g2));
    checks.residual("pi_coproduct", cop, tol);
    checks.residual("pi_counit", max_abs(&(&eps2 * pm - &eps1)), tol);
    checks.residual("pi_coinvolution", kap, tol);
    checks.residual("pi_multiplicative", mul, tol);
    checks.residual("pi_adjoint", adj, tol);
    checks.residual("pi_unital", unit, tol);
    if !checks.all_passed() {
        let worst: Vec<String> =
            checks.failures().map(|c| format!("{} {:.3e}", c.name, c.residual)).collect();
        return Err(Error::ExpectationRefused(format!("π is not a Hopf epimorphism: {}", worst.join(", "))));
    }

    // f = μ₂∘π as a row vector on the group basis of A₁.
    let mu2 = CMatrix::from_row_slice(1, n2, &bundle2.haar_vector());
    let f = (&mu2 * pm).transpose();
    let a = Space::algebra(n1);
    let left = CMatrix::from_fn(n1, n1, |y, g| (0..n1).map(|x| f[x] * deltas[g][(x, y)]).sum());
    let right = CMatrix::from_fn(n1, n1, |x, g| (0..n1).map(|y| deltas[g][(x, y)] * f[y]).sum());
    checks.residual("commute", max_abs(&(&left * &right - &right * &left)), tol);
    let map = LinearMap::new(a, a, &left * &right)?;
    let e = ConditionalExpectation::new(
        bundle1,
        map,
        Provenance::DoubleCoset { quotient: g2.name().to_string() },
        CheckReport::new(),
    )?;

    let mut linv: f64 = 0.0;
    let mut rinv: f64 = 0.0;
    let mut gp: f64 = 0.0;
    for b in e.range_basis() {
        let d = tensor_matrix(&bundle1.coproduct(&b));
        let bv = vector(&b);
        // (π⊗id)Δ(b) = 1⊗b: row 0 equals b, other rows vanish.
        let mut want = CMatrix::zeros(n2, n1);
        want.set_row(0, &bv.transpose());
        linv = linv.max(max_abs(&(pm * &d - want)));
        let mut want = CMatrix::zeros(n1, n2);
        want.set_column(0, &bv);
        rinv = rinv.max(max_abs(&(&d * pm.transpose() - want)));
        // (id⊗μ₂π⊗id)(Δ⊗id)Δ(b) against (P⊗P)Δ(b).
        let t = bundle1.coproduct_left(&bundle1.coproduct(&b));
        let mut contracted = CMatrix::zeros(n1, n1);
        for (k, c) in t.nonzeros() {
            let [x, y, z] = t.split(k);
            contracted[(x, z)] += f[y] * c;
        }
        gp = gp.max(max_abs(&(e.both_legs(&d) - contracted)));
    }
    checks.residual("left_invariant_range", linv, tol);
    checks.residual("right_invariant_range", rinv, tol);
    checks.residual("convolution_formula", gp, tol);
    Ok(ConditionalExpectation { construction: checks, ..e })
}

/// Orbital expectation on a commutative bundle whose points are the
/// characters of `family` (which must cover the whole group):
/// `P(P_x) = q_{[x]}(x) Σ_{z∈[x]} P_z`.
pub fn orbital_expectation(
    bundle: &KacBundle,
    family: &IdempotentFamily,
    partition: &Partition,
    weights: &[Vec<f64>],
    tol: f64,
) -> Result<ConditionalExpectation> {
    let g = bundle.group().clone();
    let n = g.order();
    let refuse = |m: String| Err(Error::ExpectationRefused(m));
    if !g.is_abelian() {
        return refuse("orbital expectations need a commutative bundle".into());
    }
    if family.len() != n || partition.size() != n {
        return refuse(format!(
            "points ({}) and partition size ({}) must match the group order {n}",
            family.len(),
            partition.size()
        ));
    }
    let h = family.subgroup();
    // Condition (a): the identity point is the character with ε(P_x) = 1.
    let e = (0..n).find(|&x| (bundle.counit(family.get(x)) - ONE).norm() <= tol);
    let Some(e) = e else { return refuse("no point carries the counit".into()) };
    if partition.blocks()[partition.block_of(e)].len() != 1 {
        return refuse("the identity point's block is not a singleton".into());
    }
    // Condition (b): blocks are closed under x ↦ x† (inverse character).
    for b in partition.blocks() {
        let target = partition.block_of(h.dual_inv(b[0]));
        if b.iter().any(|&x| partition.block_of(h.dual_inv(x)) != target)
            || partition.blocks()[target].len() != b.len()
        {
            return refuse(format!("partition is not ⋆-stable at block {b:?}"));
        }
    }
    // Condition (c): probability weights supported on each block.
    if weights.len() != partition.len() {
        return refuse(format!("{} weight vectors for {} blocks", weights.len(), partition.len()));
    }
    for (b, w) in partition.blocks().iter().zip(weights) {
        let sum: f64 = w.iter().sum();
        if w.len() != b.len() || w.iter().any(|&q| q < -tol) || (sum - 1.0).abs() > tol {
            return refuse(format!("weights {w:?} on block {b:?} are not a probability vector"));
        }
    }

    let gram = mu_gram(bundle);
    let proj: Vec<CVector> = family.projections().iter().map(vector).collect();
    let indicators: Vec<CVector> = partition
        .blocks()
        .iter()
        .map(|b| b.iter().fold(CVector::zeros(n), |acc, &z| acc + &proj[z]))
        .collect();
    let image_of_point = |x: usize| {
        let bi = partition.block_of(x);
        let pos = partition.blocks()[bi].iter().position(|&z| z == x).expect("x is in its block");
        indicators[bi].scale(weights[bi][pos])
    };
    let a = Space::algebra(n);
    let mut m = CMatrix::zeros(n, n);
    for gi in 0..n {
        let lam = vector(&AlgebraElement::lambda(&g, gi));
        let mut col = CVector::zeros(n);
        for (x, p) in proj.iter().enumerate() {
            let c = (p.adjoint() * &gram * &lam)[(0, 0)] / (p.adjoint() * &gram * p)[(0, 0)];
            col += image_of_point(x) * c;
        }
        m.set_column(gi, &col);
    }
    let mut construction = CheckReport::new();
    let star = (0..n)
        .map(|x| bundle.star(family.get(x)).distance(family.get(h.dual_inv(x))))
        .fold(0.0, f64::max);
    construction.residual("star_is_point_inverse", star, tol);
    let map = LinearMap::new(a, a, m)?;
    let out = ConditionalExpectation::new(
        bundle,
        map,
        Provenance::Orbital { partition: partition.clone(), weights: weights.to_vec() },
        construction,
    )?;
    Ok(out)
}

/// `‖(P⊗P)Δ(x)‖∞`; zero for every `x ∈ ker P` exactly when `ker P` is a
/// coideal.
pub fn kernel_coideal_residual(p: &ConditionalExpectation, bundle: &KacBundle, x: &AlgebraElement) -> f64 {
    max_abs(&p.both_legs(&tensor_matrix(&bundle.coproduct(x))))
}

/// The one-dimensional central projection `p_ε` with `a·p_ε = ε(a)p_ε`,
/// solved from the eigenvalue system on the generators.
pub fn counit_projection(bundle: &KacBundle, tol: f64) -> Result<AlgebraElement> {
    let g = bundle.group().clone();
    let n = g.order();
    let gens: Vec<usize> = if g.generators().is_empty() { vec![0] } else { g.generators().to_vec() };
    let mut sys = CMatrix::zeros(n * gens.len(), n);
    for (i, &s) in gens.iter().enumerate() {
        let ls = AlgebraElement::lambda(&g, s);
        let eps = bundle.counit(&ls);
        for x in 0..n {
            let col = &ls * &AlgebraElement::lambda(&g, x);
            for y in 0..n {
                sys[(i * n + y, x)] = col.coeffs()[y] - if y == x { eps } else { ZERO };
            }
        }
    }
    let ns = null_space(&sys, 1e-10);
    if ns.ncols() != 1 {
        return Err(Error::Numerical(format!("counit eigenspace has dimension {}", ns.ncols())));
    }
    let v = element(&g, &ns.column(0).into_owned());
    let v2 = &v * &v;
    let k = (0..n).max_by(|&a, &b| v.coeffs()[a].norm().total_cmp(&v.coeffs()[b].norm())).expect("n > 0");
    let p = v.scale(v.coeffs()[k] / v2.coeffs()[k]);
    let idem = (&p * &p).distance(&p);
    if idem > tol || p.distance(&p.adjoint()) > tol {
        return Err(Error::Numerical(format!("counit eigenvector is not a projection ({idem:.3e})")));
    }
    Ok(p)
}

/// Hypotheses for `(P⊗P)Δ` to be a hypergroup coproduct on `B`:
///
/// * `kernel_coideal`: `ker P` is a coideal, tested as `(P⊗P)Δ((1−P)λg) = 0`.
/// * `kappa_commutes`, `star_commutes`: `Pκ = κP` and `P⋆ = ⋆P`.
/// * `haar_invariance`: `μ∘P = μ`.
/// * `counit`: either `ε∘P = ε`, or both identities for the counit
///   projection `p_ε`: `(P⊗P)[(p_ε⊗1)Δ(b)] = (P⊗P)[(P(p_ε)⊗1)Δ(b)]` and its
///   mirror on `B`.
pub fn check_expectation_hypotheses(p: &ConditionalExpectation, bundle: &KacBundle, tol: f64) -> CheckReport {
    let g = bundle.group().clone();
    let n = g.order();
    let pm = p.matrix();
    let lam = |x: usize| AlgebraElement::lambda(&g, x);
    let mut r = CheckReport::new();

    let mut worst: f64 = 0.0;
    let mut witness = None;
    for x in 0..n {
        let k = &lam(x) - &p.apply(&lam(x));
        let res = kernel_coideal_residual(p, bundle, &k);
        if res > worst {
            worst = res;
            witness = Some(x);
        }
    }
    let note = witness.filter(|_| worst > tol).map(|x| format!("worst kernel element (1−P)λ({})", g.label(x)));
    r.flag("kernel_coideal", worst <= tol, worst, note);

    let kappa = bundle.coinvolution_map().matrix();
    r.residual("kappa_commutes", max_abs(&(pm * kappa - kappa * pm)), tol);
    let star = (0..n)
        .map(|x| p.apply(&bundle.star(&lam(x))).distance(&bundle.star(&p.apply(&lam(x)))))
        .fold(0.0, f64::max);
    r.residual("star_commutes", star, tol);
    let mu = CMatrix::from_row_slice(1, n, &bundle.haar_vector());
    r.residual("haar_invariance", max_abs(&(&mu * pm - &mu)), tol);

    let eps = CMatrix::from_row_slice(1, n, &bundle.counit_vector());
    let direct = max_abs(&(&eps * pm - &eps));
    if direct <= tol {
        r.flag("counit", true, direct, Some("ε∘P = ε".into()));
        return r;
    }
    match counit_projection(bundle, tol) {
        Ok(pe) => {
            let ppe = p.apply(&pe);
            let (lp, lpp) = (left_mult(&pe), left_mult(&ppe));
            let mut res: f64 = 0.0;
            for b in p.range_basis() {
                let d = tensor_matrix(&bundle.coproduct(&b));
                res = res.max(max_abs(&p.both_legs(&(&lp * &d - &lpp * &d))));
                res = res.max(max_abs(&p.both_legs(&(&d * lp.transpose() - &d * lpp.transpose()))));
            }
            let ok = res <= tol;
            let note = if ok { "via the counit projection p_ε" } else { "ε∘P ≠ ε and the p_ε identities fail" };
            r.flag("counit", ok, res, Some(note.into()));
        }
        Err(e) => r.flag("counit", false, direct, Some(format!("ε∘P ≠ ε and no p_ε: {e}"))),
    }
    r
}

/// Matrix of `x ↦ a·x` on coefficient vectors.
fn left_mult(a: &AlgebraElement) -> CMatrix {
    let g = a.group().clone();
    let n = g.order();
    let mut m = CMatrix::zeros(n, n);
    for (h, c) in a.nonzeros() {
        for x in 0..n {
            m[(g.mul(h, x), x)] += c;
        }
    }
    m
}
