//! The induced coproduct `Δ̃ = (P⊗P)Δ` on `B = P(A)`, expressed in the
//! orthonormal range basis, and the quantum-hypergroup verifier.

use std::sync::Arc;

use num_complex::Complex64;

use super::expectation::{
    check_expectation_hypotheses, element, tensor_matrix, vector, ConditionalExpectation, Provenance,
};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::kac::KacBundle;
use crate::linalg::dense::{hermitian_deviation, max_abs, min_eigenvalue, null_space, rank};
use crate::linalg::{is_positive_matrix, AlgebraElement, BlockDecomposition, CMatrix, CVector};
use crate::report::CheckReport;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default largest `dim A` for which complete positivity is evaluated.
pub const DEFAULT_CP_LIMIT: usize = 24;

/// `(B, Δ̃, ε, ⋆, μ)` in coordinates of the `μ`-orthonormal basis `e_k` of
/// `B`. Tensors in `B⊗B` are `d×d` coefficient matrices.
#[derive(Clone, Debug)]
pub struct HypergroupBundle {
    group: Arc<FiniteGroup>,
    twisted: bool,
    expectation: ConditionalExpectation,
    /// `Δ̃(e_k)` as `d×d` coordinates.
    coproduct: Vec<CMatrix>,
    /// `Δ̃(e_k)` as `n×n` coefficient matrices in `A⊗A`.
    coproduct_full: Vec<CMatrix>,
    /// `mult[i*d + j]` = coordinates of `e_i e_j`.
    mult: Vec<CVector>,
    /// Column `k` holds the coordinates of `⋆(e_k)`.
    star: CMatrix,
    /// Column `k` holds the coordinates of `e_k*`.
    adjoint: CMatrix,
    /// Column `k` holds the coordinates of `κ(e_k)`.
    kappa: CMatrix,
    counit: CVector,
    haar: CVector,
    unit: CVector,
    blocks: BlockDecomposition,
    /// Block representations `π_b(e_k)`, indexed `[block][k]`.
    reps: Vec<Vec<CMatrix>>,
    hypotheses: CheckReport,
    construction: CheckReport,
}

/// Builds `Δ̃(b) = (P⊗P)Δ(b)` on `B`. Fails with `HypothesisFailed` when
/// [`check_expectation_hypotheses`] reports a failure, unless
/// `allow_failed_hypotheses` is set for counterexample studies.
pub fn induced_coproduct(
    p: &ConditionalExpectation,
    bundle: &KacBundle,
    allow_failed_hypotheses: bool,
    tol: f64,
) -> Result<HypergroupBundle> {
    let g = bundle.group().clone();
    if !Arc::ptr_eq(&g, p.group()) && **p.group() != *g {
        return Err(Error::GroupMismatch);
    }
    let hypotheses = check_expectation_hypotheses(p, bundle, tol);
    if !hypotheses.all_passed() && !allow_failed_hypotheses {
        let failed: Vec<String> =
            hypotheses.failures().map(|c| format!("{} ({:.3e})", c.name, c.residual)).collect();
        return Err(Error::HypothesisFailed(failed.join(", ")));
    }
    let d = p.dim();
    let e = p.basis_matrix();
    let c = p.coord_matrix();
    let basis = p.range_basis();
    let mut construction = CheckReport::new();

    let mut coproduct = Vec::with_capacity(d);
    let mut coproduct_full = Vec::with_capacity(d);
    let mut in_range: f64 = 0.0;
    let mut delsart: f64 = 0.0;
    for b in &basis {
        let delta = tensor_matrix(&bundle.coproduct(b));
        let x = p.both_legs(&delta);
        let coords = c * &x * c.transpose();
        in_range = in_range.max(max_abs(&(e * &coords * e.transpose() - &x)));
        delsart = delsart.max(max_abs(&(&x - &delta * p.matrix().transpose())));
        coproduct.push(coords);
        coproduct_full.push(x);
    }
    construction.residual("coproduct_in_range", in_range, tol);
    if matches!(p.provenance(), Provenance::Delsart { .. }) {
        construction.residual("one_sided_form", delsart, tol);
    }

    let coords_of = |a: &AlgebraElement| c * vector(a);
    let range_residual = |a: &AlgebraElement, k: &CVector| (e * k - vector(a)).camax();
    let mut mult = Vec::with_capacity(d * d);
    let mut closed: f64 = 0.0;
    for x in &basis {
        for y in &basis {
            let xy = x * y;
            let k = coords_of(&xy);
            closed = closed.max(range_residual(&xy, &k));
            mult.push(k);
        }
    }
    construction.residual("range_closed_product", closed, tol);

    let mut cols = |f: &dyn Fn(&AlgebraElement) -> AlgebraElement, name: &str| {
        let mut worst: f64 = 0.0;
        let vs: Vec<CVector> = basis
            .iter()
            .map(|b| {
                let y = f(b);
                let k = coords_of(&y);
                worst = worst.max(range_residual(&y, &k));
                k
            })
            .collect();
        construction.residual(name, worst, tol);
        CMatrix::from_columns(&vs)
    };
    let star = cols(&|b| bundle.star(b), "range_closed_star");
    let adjoint = cols(&|b| b.adjoint(), "range_closed_adjoint");
    let kappa = cols(&|b| bundle.kappa(b), "range_closed_kappa");

    let counit = CVector::from_iterator(d, basis.iter().map(|b| bundle.counit(b)));
    let haar = CVector::from_iterator(d, basis.iter().map(|b| bundle.haar(b)));
    let unit = coords_of(&AlgebraElement::one(&g));

    let blocks = BlockDecomposition::new(&basis, tol.max(1e-9), crate::DEFAULT_SEED)?;
    let reps = {
        let per_elem: Vec<Vec<CMatrix>> = basis.iter().map(|b| blocks.represent(b)).collect();
        (0..blocks.blocks().len())
            .map(|bi| per_elem.iter().map(|r| r[bi].clone()).collect())
            .collect()
    };

    Ok(HypergroupBundle {
        group: g,
        twisted: bundle.twist().is_some(),
        expectation: p.clone(),
        coproduct,
        coproduct_full,
        mult,
        star,
        adjoint,
        kappa,
        counit,
        haar,
        unit,
        blocks,
        reps,
        hypotheses,
        construction,
    })
}

impl HypergroupBundle {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// The base bundle carried a twist.
    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    pub fn dim(&self) -> usize {
        self.coproduct.len()
    }

    pub fn expectation(&self) -> &ConditionalExpectation {
        &self.expectation
    }

    pub fn basis(&self) -> Vec<AlgebraElement> {
        self.expectation.range_basis()
    }

    /// Coordinates of `Δ̃(e_k)`: entry `(i,j)` multiplies `e_i⊗e_j`.
    pub fn coproduct_coords(&self, k: usize) -> &CMatrix {
        &self.coproduct[k]
    }

    /// `Δ̃(e_k)` as an `n×n` coefficient matrix in `A⊗A`.
    pub fn coproduct_full(&self, k: usize) -> &CMatrix {
        &self.coproduct_full[k]
    }

    /// Coordinates of `Δ̃(b)` for `b` given by coordinates.
    pub fn coproduct_of(&self, b: &CVector) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for (k, c) in b.iter().enumerate() {
            if *c != ZERO {
                out += self.coproduct[k].scale_c(*c);
            }
        }
        out
    }

    /// Coordinates of `e_i e_j`.
    pub fn product_coords(&self, i: usize, j: usize) -> &CVector {
        &self.mult[i * self.dim() + j]
    }

    /// Coordinates of `xy` for `x`, `y` in coordinates.
    pub fn multiply(&self, x: &CVector, y: &CVector) -> CVector {
        let d = self.dim();
        let mut out = CVector::zeros(d);
        for i in 0..d {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..d {
                if y[j] != ZERO {
                    out.axpy(x[i] * y[j], &self.mult[i * d + j], ONE);
                }
            }
        }
        out
    }

    pub fn star_matrix(&self) -> &CMatrix {
        &self.star
    }

    pub fn adjoint_matrix(&self) -> &CMatrix {
        &self.adjoint
    }

    pub fn counit_coords(&self) -> &CVector {
        &self.counit
    }

    pub fn haar_coords(&self) -> &CVector {
        &self.haar
    }

    pub fn unit_coords(&self) -> &CVector {
        &self.unit
    }

    /// Matrix sizes of the simple blocks of `B`, ascending.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.structure().sorted_sizes()
    }

    pub fn block_decomposition(&self) -> &BlockDecomposition {
        &self.blocks
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.structure().is_commutative()
    }

    /// Results of [`check_expectation_hypotheses`] at construction.
    pub fn hypotheses(&self) -> &CheckReport {
        &self.hypotheses
    }

    /// Closure of `B` under the structure maps and the one-sided Delsart form.
    pub fn construction(&self) -> &CheckReport {
        &self.construction
    }

    /// `x ∈ A` in coordinates of `B`; exact for `x ∈ B`.
    pub fn coords(&self, x: &AlgebraElement) -> CVector {
        self.expectation.coords(x)
    }

    pub fn element(&self, coords: &CVector) -> AlgebraElement {
        element(&self.group, &(self.expectation.basis_matrix() * coords))
    }

    /// `Δ̃(b)` in `A⊗A` for `b ∈ B`.
    pub fn coproduct_in_algebra(&self, b: &AlgebraElement) -> CMatrix {
        let c = self.coords(b);
        let n = self.group.order();
        let mut out = CMatrix::zeros(n, n);
        for (k, x) in c.iter().enumerate() {
            if x.norm() > 0.0 {
                out += self.coproduct_full[k].scale_c(*x);
            }
        }
        out
    }

    /// `‖Δ̃(b) − ΣΔ̃(b)‖∞` in the group basis of `A⊗A`.
    pub fn symmetry_defect(&self, b: &AlgebraElement) -> f64 {
        let x = self.coproduct_in_algebra(b);
        max_abs(&(&x - x.transpose()))
    }

    /// `π_b(x)` for `x` in coordinates.
    fn represent(&self, block: usize, x: &CVector) -> CMatrix {
        let s = self.blocks.blocks()[block].size;
        let mut out = CMatrix::zeros(s, s);
        for (k, c) in x.iter().enumerate() {
            if *c != ZERO {
                out += self.reps[block][k].scale_c(*c);
            }
        }
        out
    }

    /// `(π_p⊗π_q)(X)` for `X ∈ B⊗B` in coordinates.
    fn represent_pair(&self, p: usize, q: usize, x: &CMatrix) -> CMatrix {
        let d = self.dim();
        let (sp, sq) = (self.blocks.blocks()[p].size, self.blocks.blocks()[q].size);
        let mut out = CMatrix::zeros(sp * sq, sp * sq);
        for a in 0..d {
            let row = x.row(a).transpose();
            if row.iter().all(|c| *c == ZERO) {
                continue;
            }
            let right = self.represent(q, &row);
            out += self.reps[p][a].kronecker(&right);
        }
        out
    }

    /// Positive in `B⊗B`, tested in every block pair.
    fn tensor_positive(&self, x: &CMatrix, tol: f64) -> bool {
        let nb = self.blocks.blocks().len();
        (0..nb).all(|p| (0..nb).all(|q| is_positive_matrix(&self.represent_pair(p, q, x), tol)))
    }

    /// Matrix units of every block in coordinates, `[block][j*s + k]`.
    fn matrix_unit_coords(&self) -> Vec<Vec<CVector>> {
        self.blocks
            .blocks()
            .iter()
            .map(|b| b.units.iter().map(|u| self.coords(u)).collect())
            .collect()
    }

    /// `μ(e_a e_b)`.
    fn haar_products(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |a, b| self.haar.dotc(&self.mult[a * d + b].conjugate()).conj())
    }
}

trait ScaleC {
    fn scale_c(&self, c: Complex64) -> Self;
}

impl ScaleC for CMatrix {
    fn scale_c(&self, c: Complex64) -> Self {
        self.map(|x| x * c)
    }
}

/// Evaluates every quantum-hypergroup axiom on `B`:
///
/// * `coassociativity`, `counit`: the coalgebra axioms of `Δ̃`.
/// * `star_coproduct` (`Δ̃∘⋆ = Σ(⋆⊗⋆)Δ̃`), `star_involutive`,
///   `star_multiplicative`, `coproduct_adjoint`, `counit_multiplicative`,
///   `coproduct_unital`, `star_adjoint_commute`.
/// * `positivity` of `Δ̃` on matrix-unit positives, `complete_positivity`
///   via Choi matrices when `dim A ≤ cp_dim_limit`.
/// * `positive_definite_span`: positive-definite elements span `B`.
/// * `haar_unique`, `haar_matches_mu`, `haar_self_conjugate`.
/// * `strong_invariance` on all basis pairs, `faithful`.
pub fn verify_hypergroup(h: &HypergroupBundle, tol: f64, cp_dim_limit: usize) -> CheckReport {
    let d = h.dim();
    let dd = &h.coproduct;
    let s = &h.star;
    let adj = &h.adjoint;
    let eps = &h.counit;
    let mut r = CheckReport::new();

    r.timed("coassociativity", tol, || {
        let mut worst: f64 = 0.0;
        for dk in dd {
            for l in 0..d {
                // Σ_j D_k[j,l] D_j  versus  rows of Σ_j D_k[a,j] D_j[b,l].
                let mut lhs = CMatrix::zeros(d, d);
                for j in 0..d {
                    if dk[(j, l)] != ZERO {
                        lhs += dd[j].scale_c(dk[(j, l)]);
                    }
                }
                let mut rhs = CMatrix::zeros(d, d);
                for j in 0..d {
                    let col = dd[j].column(l);
                    for a in 0..d {
                        let c = dk[(a, j)];
                        if c != ZERO {
                            for b in 0..d {
                                rhs[(a, b)] += c * col[b];
                            }
                        }
                    }
                }
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
        }
        worst
    });

    r.timed("counit", tol, || {
        let mut worst: f64 = 0.0;
        for (k, dk) in dd.iter().enumerate() {
            let left = dk.transpose() * eps;
            let right = dk * eps;
            for i in 0..d {
                let want = if i == k { ONE } else { ZERO };
                worst = worst.max((left[i] - want).norm()).max((right[i] - want).norm());
            }
        }
        worst
    });

    r.timed("star_coproduct", tol, || {
        let mut worst: f64 = 0.0;
        for (k, dk) in dd.iter().enumerate() {
            let lhs = h.coproduct_of(&s.column(k).into_owned());
            let rhs = (s * dk.conjugate() * s.transpose()).transpose();
            worst = worst.max(max_abs(&(lhs - rhs)));
        }
        worst
    });
    r.timed("star_involutive", tol, || max_abs(&(s * s.conjugate() - CMatrix::identity(d, d))));
    r.timed("star_multiplicative", tol, || {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let lhs = s * h.mult[i * d + j].conjugate();
                let rhs = h.multiply(&s.column(i).into_owned(), &s.column(j).into_owned());
                worst = worst.max((lhs - rhs).camax());
            }
        }
        worst
    });
    r.timed("coproduct_adjoint", tol, || {
        let mut worst: f64 = 0.0;
        for (k, dk) in dd.iter().enumerate() {
            let lhs = h.coproduct_of(&adj.column(k).into_owned());
            let rhs = adj * dk.conjugate() * adj.transpose();
            worst = worst.max(max_abs(&(lhs - rhs)));
        }
        worst
    });
    r.timed("counit_multiplicative", tol, || {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let e = eps.dotc(&h.mult[i * d + j].conjugate()).conj();
                worst = worst.max((e - eps[i] * eps[j]).norm());
            }
        }
        worst
    });
    r.timed("coproduct_unital", tol, || {
        let u = &h.unit;
        max_abs(&(h.coproduct_of(u) - u * u.transpose()))
    });
    r.timed("star_adjoint_commute", tol, || max_abs(&(s * adj.conjugate() - adj * s.conjugate())));

    let units = h.matrix_unit_coords();
    r.timed("positivity_violations", 0.5, || {
        let mut bad = 0usize;
        for (bi, block) in units.iter().enumerate() {
            let size = h.blocks.blocks()[bi].size;
            let u = |j: usize, k: usize| &block[j * size + k];
            for j in 0..size {
                if !h.tensor_positive(&h.coproduct_of(u(j, j)), tol) {
                    bad += 1;
                }
                for k in j + 1..size {
                    let diag = u(j, j) + u(k, k);
                    let real = &diag + u(j, k) + u(k, j);
                    let imag = &diag - u(j, k) * I + u(k, j) * I;
                    for x in [real, imag] {
                        if !h.tensor_positive(&h.coproduct_of(&x), tol) {
                            bad += 1;
                        }
                    }
                }
            }
        }
        bad as f64
    });

    if h.group.order() <= cp_dim_limit {
        r.timed("complete_positivity_violations", 0.5, || {
            let nb = h.blocks.blocks().len();
            let mut bad = 0usize;
            for (bi, block) in units.iter().enumerate() {
                let size = h.blocks.blocks()[bi].size;
                for p in 0..nb {
                    for q in 0..nb {
                        let t = h.blocks.blocks()[p].size * h.blocks.blocks()[q].size;
                        let mut choi = CMatrix::zeros(size * t, size * t);
                        for j in 0..size {
                            for k in 0..size {
                                let img = h.represent_pair(p, q, &h.coproduct_of(&block[j * size + k]));
                                choi.view_mut((j * t, k * t), (t, t)).copy_from(&img);
                            }
                        }
                        if !is_positive_matrix(&choi, tol) {
                            bad += 1;
                        }
                    }
                }
            }
            bad as f64
        });
    } else {
        r.skip(
            "complete_positivity_violations",
            format!("not evaluated: dim A = {} exceeds the limit {cp_dim_limit}", h.group.order()),
        );
    }

    r.timed("positive_definite_deficit", 0.5, || (d - positive_definite_rank(h, tol)) as f64);

    let haar_space = haar_solutions(h);
    r.flag(
        "haar_unique",
        haar_space.ncols() == 1,
        haar_space.ncols() as f64,
        Some(format!("solution space of dimension {}", haar_space.ncols())),
    );
    if haar_space.ncols() == 1 {
        let xi = haar_space.column(0).into_owned();
        let norm = xi.dotc(&h.unit.conjugate()).conj();
        let xi = xi.map(|x| x / norm);
        r.residual("haar_matches_mu", (&xi - &h.haar).camax(), tol);
    } else {
        r.skip("haar_matches_mu", "Haar solution is not unique");
    }
    r.timed("haar_self_conjugate", tol, || {
        let plus = (s.transpose() * &h.haar).conjugate();
        (plus - &h.haar).camax()
    });

    r.timed("strong_invariance", tol, || strong_invariance_residual(h));
    let gram = adj.transpose() * h.haar_products();
    let min = crate::linalg::dense::min_eigenvalue(&gram);
    let herm = crate::linalg::dense::hermitian_deviation(&gram);
    r.flag(
        "faithful",
        min > tol.sqrt() && herm <= tol,
        min,
        Some("smallest eigenvalue of μ(e_i* e_j)".into()),
    );
    r
}

/// `(id⊗μ)((κ⊗id)Δ̃(a)(1⊗b)) = (id⊗μ)((1⊗a)Δ̃(b))` on all basis pairs.
pub fn strong_invariance_residual(h: &HypergroupBundle) -> f64 {
    let d = h.dim();
    let mu = h.haar_products();
    let mut worst: f64 = 0.0;
    for a in 0..d {
        let ka = &h.kappa * &h.coproduct[a];
        for b in 0..d {
            let lhs = &ka * mu.column(b);
            let rhs = &h.coproduct[b] * mu.row(a).transpose();
            worst = worst.max((lhs - rhs).camax());
        }
    }
    worst
}

/// Solutions `ξ` of `(ξ⊗id)Δ̃ = (id⊗ξ)Δ̃ = ξ(·)1`, as columns.
pub fn haar_solutions(h: &HypergroupBundle) -> CMatrix {
    let d = h.dim();
    let u = &h.unit;
    let mut sys = CMatrix::zeros(2 * d * d, d);
    for (k, dk) in h.coproduct.iter().enumerate() {
        for b in 0..d {
            let row = k * d + b;
            for a in 0..d {
                sys[(row, a)] += dk[(a, b)];
                sys[(d * d + row, a)] += dk[(b, a)];
            }
            sys[(row, k)] -= u[b];
            sys[(d * d + row, k)] -= u[b];
        }
    }
    null_space(&sys, 1e-9)
}

/// `G(a)_{ij} = (ξ_i·ξ_j⁺)(a)` over the dual basis.
pub fn positive_definite_gram(h: &HypergroupBundle, a: &CVector) -> CMatrix {
    h.coproduct_of(a) * h.star.adjoint()
}

/// Complex rank of the positive-definite cone in `B`.
///
/// `t = Σ_k (id⊗ξ_k)Δ̃(e_k)` represents the trace of the left regular
/// representation of `B′`. When `G(t)` is positive definite, `t` is interior
/// to the cone inside the real space `V = {a : G(a) = G(a)ᴴ}`, so the cone
/// spans `V` and the rank is `dim_ℂ span V`. Otherwise the rank is that of
/// the explicit candidates `(μ⊗id)((b*⊗1)Δ̃(b))`, `b ∈ {e_k, 1 + e_k, 1 + i e_k}`.
fn positive_definite_rank(h: &HypergroupBundle, tol: f64) -> usize {
    let d = h.dim();
    let mut found: Vec<CVector> = Vec::new();
    let mut t = CVector::zeros(d);
    for k in 0..d {
        t += h.coproduct_coords(k).column(k);
    }
    let gt = positive_definite_gram(h, &t);
    if hermitian_deviation(&gt) <= tol && min_eigenvalue(&gt) > tol {
        found.extend(hermitian_gram_space(h));
    } else {
        let mut seeds = Vec::with_capacity(3 * d);
        for k in 0..d {
            let mut e = CVector::zeros(d);
            e[k] = ONE;
            seeds.push(&h.unit + &e);
            seeds.push(&h.unit + &e * I);
            seeds.push(e);
        }
        for b in seeds {
            let a = h.coproduct_of(&b).transpose() * b.conjugate();
            if is_positive_matrix(&positive_definite_gram(h, &a), tol) {
                found.push(a);
            }
        }
    }
    if found.is_empty() {
        return 0;
    }
    rank(&CMatrix::from_columns(&found), 1e-8)
}

/// A real basis of `{a : G(a) = G(a)ᴴ}`, written as complex coordinates.
fn hermitian_gram_space(h: &HypergroupBundle) -> Vec<CVector> {
    let d = h.dim();
    let mut sys = CMatrix::zeros(2 * d * d, 2 * d);
    for k in 0..d {
        let gk = h.coproduct_coords(k) * h.star.adjoint();
        let re = &gk - gk.adjoint();
        let im = (&gk + gk.adjoint()) * I;
        for (col, m) in [(k, &re), (d + k, &im)] {
            for (r, z) in m.iter().enumerate() {
                sys[(r, col)] = Complex64::new(z.re, 0.0);
                sys[(d * d + r, col)] = Complex64::new(z.im, 0.0);
            }
        }
    }
    let ns = null_space(&sys, 1e-9);
    let mut out = Vec::with_capacity(2 * ns.ncols());
    for v in ns.column_iter() {
        for part in [v.map(|z| z.re), v.map(|z| z.im)] {
            out.push(CVector::from_fn(d, |k, _| Complex64::new(part[k], part[d + k])));
        }
    }
    out
}

/// A basis element `P(λg)` with the largest symmetry defect.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryWitness {
    pub element: usize,
    pub label: String,
    pub defect: f64,
}

/// Searches all `P(λg)`, which span `B`; `None` when every defect is at
/// most `tol`. Ties keep the smallest group index.
pub fn symmetry_witness(h: &HypergroupBundle, tol: f64) -> Option<SymmetryWitness> {
    let g = h.group.clone();
    let mut best: Option<SymmetryWitness> = None;
    for x in 0..g.order() {
        let b = h.expectation.apply(&AlgebraElement::lambda(&g, x));
        let defect = h.symmetry_defect(&b);
        if defect > tol && best.as_ref().is_none_or(|w| defect > w.defect + 1e-12) {
            best = Some(SymmetryWitness { element: x, label: g.label(x).to_string(), defect });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, Family, GroupAutomorphism};
    use crate::hypergroup::delsart_expectation;
    use crate::kac::group_kac;
    use crate::twist::admissible_automorphism;

    #[test]
    fn trivial_gamma_reproduces_coproduct() {
        let b = group_kac(build_family(Family::Dihedral(3)).unwrap());
        let p = delsart_expectation(&b, &[], 1e-9).unwrap();
        let h = induced_coproduct(&p, &b, false, 1e-9).unwrap();
        for x in 0..12 {
            let want = tensor_matrix(&b.coproduct_basis(x));
            let got = h.coproduct_in_algebra(&AlgebraElement::lambda(b.group(), x));
            assert!(max_abs(&(want - got)) < 1e-12);
        }
        let r = verify_hypergroup(&h, 1e-9, DEFAULT_CP_LIMIT);
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(haar_solutions(&h).ncols(), 1);
        assert!(symmetry_witness(&h, 1e-9).is_none());
    }

    #[test]
    fn symmetric_group_average_is_hypergroup() {
        let b = group_kac(build_family(Family::Dihedral(2)).unwrap());
        let g = b.group().clone();
        let alpha = GroupAutomorphism::inner(&g, g.find("b").unwrap());
        let p = delsart_expectation(&b, &[admissible_automorphism(&alpha, &b, 1e-9)], 1e-9).unwrap();
        let h = induced_coproduct(&p, &b, false, 1e-9).unwrap();
        assert_eq!(h.dim(), 6);
        assert!(h.construction().all_passed(), "{:?}", h.construction());
        let r = verify_hypergroup(&h, 1e-9, DEFAULT_CP_LIMIT);
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
