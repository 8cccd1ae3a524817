//! Functionals on `B` with the convolution product `(ξ·η)(a) = (ξ⊗η)Δ̃(a)`,
//! the pushforward `P′` to functionals on `A`, and structure constants of `Δ̃`
//! in a chosen basis.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;

use super::bundle::HypergroupBundle;
use super::expectation::{tensor_matrix, vector, ConditionalExpectation};
use crate::error::{Error, Result};
use crate::kac::KacBundle;
use crate::linalg::dense::{max_abs, rank};
use crate::linalg::{AlgebraElement, CMatrix, CVector};

/// `ξ` given by its values `ξ(e_k)` on the orthonormal basis of `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFunctional {
    values: CVector,
}

impl DualFunctional {
    pub fn new(values: CVector) -> Self {
        DualFunctional { values }
    }

    /// The dual basis functional `ξ_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[k] = Complex64::new(1.0, 0.0);
        DualFunctional { values: v }
    }

    pub fn values(&self) -> &CVector {
        &self.values
    }

    /// `ξ(b)` for `b` in coordinates.
    pub fn eval(&self, b: &CVector) -> Complex64 {
        self.values.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
    }

    /// `(ξ·η)(e_k) = Σ_ij ξ(e_i)η(e_j) c_ijk`.
    pub fn mul(&self, other: &Self, h: &HypergroupBundle) -> Self {
        let d = h.dim();
        let v = CVector::from_iterator(
            d,
            (0..d).map(|k| (self.values.transpose() * h.coproduct_coords(k) * &other.values)[(0, 0)]),
        );
        DualFunctional { values: v }
    }

    /// `ξ⁺(a) = conj ξ(a⋆)`.
    pub fn plus(&self, h: &HypergroupBundle) -> Self {
        DualFunctional { values: (h.star_matrix().transpose() * &self.values).conjugate() }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.values - &other.values).camax()
    }
}

/// Residuals of `P′(ξ_i·ξ_j) = P′ξ_i·P′ξ_j` and `P′(ξ_i⁺) = (P′ξ_i)⁺` over the
/// dual basis, where `⟨P′ξ, a⟩ = ⟨ξ, Pa⟩`. Returns `(product, involution)`.
pub fn dual_pushforward_residuals(
    p: &ConditionalExpectation,
    bundle: &KacBundle,
    h: &HypergroupBundle,
) -> (f64, f64) {
    let g = bundle.group().clone();
    let n = g.order();
    let d = h.dim();
    // f[(i, g)] = (P′ξ_i)(λg).
    let f = p.coord_matrix() * p.matrix();
    let mut prod: f64 = 0.0;
    let mut inv: f64 = 0.0;
    for x in 0..n {
        let mut lhs = CMatrix::zeros(d, d);
        for k in 0..d {
            lhs += h.coproduct_coords(k).map(|c| c * f[(k, x)]);
        }
        let rhs = &f * tensor_matrix(&bundle.coproduct_basis(x)) * f.transpose();
        prod = prod.max(max_abs(&(lhs - rhs)));

        let pushed_plus = (h.star_matrix() * f.column(x).conjugate()).conjugate();
        let star = vector(&bundle.star(&AlgebraElement::lambda(&g, x)));
        let plus_pushed = (&f * star).conjugate();
        inv = inv.max((pushed_plus - plus_pushed).camax());
    }
    (prod, inv)
}

/// `P′` is a `*`-homomorphism on the dual basis within `tol`.
pub fn dual_pushforward_check(
    p: &ConditionalExpectation,
    bundle: &KacBundle,
    h: &HypergroupBundle,
    tol: f64,
) -> bool {
    let (prod, inv) = dual_pushforward_residuals(p, bundle, h);
    prod <= tol && inv <= tol
}

/// `Δ̃(b_k) = Σ_ij c_ijk b_i⊗b_j` for a chosen basis `b`.
#[derive(Clone, Debug, Serialize)]
pub struct StructureConstants {
    dim: usize,
    #[serde(skip)]
    values: Vec<Complex64>,
    /// `max_k ‖Δ̃(b_k) − Σ c_ijk b_i⊗b_j‖∞` in `A⊗A`.
    pub residual: f64,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.values[(i * self.dim + j) * self.dim + k]
    }

    /// Terms of `Δ̃(b_k)` with modulus above `tol`, as `(i, j, c_ijk)`.
    pub fn expansion(&self, k: usize, tol: f64) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let c = self.get(i, j, k);
                if c.norm() > tol {
                    out.push((i, j, c));
                }
            }
        }
        out
    }
}

/// Expands `Δ̃` in `basis`, which must be a basis of `B`.
pub fn structure_constants(
    h: &HypergroupBundle,
    basis: &[AlgebraElement],
    tol: f64,
) -> Result<StructureConstants> {
    let d = h.dim();
    if basis.len() != d {
        return Err(Error::NotSpanning(format!("{} elements for dim B = {d}", basis.len())));
    }
    let cols: Vec<CVector> = basis.iter().map(|b| h.coords(b)).collect();
    for (i, (b, c)) in basis.iter().zip(&cols).enumerate() {
        let r = h.element(c).distance(b);
        if r > tol {
            return Err(Error::NotSpanning(format!("element {i} lies outside B (residual {r:.3e})")));
        }
    }
    let t = CMatrix::from_columns(&cols);
    if rank(&t, 1e-9) < d {
        return Err(Error::NotSpanning("elements are linearly dependent".into()));
    }
    let tinv = t.clone().try_inverse().ok_or_else(|| Error::NotSpanning("singular basis".into()))?;
    let mut values = vec![Complex64::new(0.0, 0.0); d * d * d];
    let mut residual: f64 = 0.0;
    for k in 0..d {
        let x = h.coproduct_of(&t.column(k).into_owned());
        let c = &tinv * &x * tinv.transpose();
        for i in 0..d {
            for j in 0..d {
                values[(i * d + j) * d + k] = c[(i, j)];
            }
        }
        let back = &t * &c * t.transpose();
        residual = residual.max(max_abs(&(back - x)));
    }
    Ok(StructureConstants { dim: d, values, residual })
}

/// Minimal projections of a commutative `B`, the neutral one (`ε = 1`)
/// first, the rest ordered by their coefficient vectors.
pub fn minimal_projections(h: &HypergroupBundle) -> Option<Vec<AlgebraElement>> {
    if !h.is_commutative() {
        return None;
    }
    let mut ps = h.block_decomposition().structure().central_idempotents;
    let key = |p: &AlgebraElement| -> Vec<i64> {
        p.coeffs().iter().flat_map(|c| [(-c.re * 1e6).round() as i64, (-c.im * 1e6).round() as i64]).collect()
    };
    let eps = |p: &AlgebraElement| h.counit_coords().dot(&h.coords(p)).re;
    ps.sort_by(|a, b| match eps(b).total_cmp(&eps(a)) {
        Ordering::Equal => key(a).cmp(&key(b)),
        o => o,
    });
    Some(ps)
}

/// Convolution data of a commutative `B` in its minimal projections.
#[derive(Clone, Debug, Serialize)]
pub struct DjsReport {
    /// Smallest real part among the structure constants.
    pub min_coefficient: f64,
    /// Largest imaginary part in modulus.
    pub max_imaginary: f64,
    /// `max_ij |Σ_k c_ijk − 1|`: each convolution is a probability vector.
    pub row_sum_residual: f64,
    /// Index of the projection with `ε(p) = 1`.
    pub neutral: Option<usize>,
    pub nonnegative: bool,
}

/// For commutative `B`, expands `Δ̃` in the minimal projections `p_z` and
/// checks that every `c_xyz` is a nonnegative real and that exactly one
/// `p_z` carries the counit.
pub fn djs_property(h: &HypergroupBundle, tol: f64) -> Option<DjsReport> {
    let ps = minimal_projections(h)?;
    let sc = structure_constants(h, &ps, tol.max(1e-9)).ok()?;
    let d = sc.dim();
    let (mut min, mut imag, mut rows): (f64, f64, f64) = (f64::INFINITY, 0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..d {
                let c = sc.get(i, j, k);
                min = min.min(c.re);
                imag = imag.max(c.im.abs());
                s += c;
            }
            rows = rows.max((s - 1.0).norm());
        }
    }
    let eps: Vec<f64> = ps.iter().map(|p| h.counit_coords().dot(&h.coords(p)).re).collect();
    let ones: Vec<usize> = (0..d).filter(|&k| (eps[k] - 1.0).abs() <= 1e-6).collect();
    let zeros = eps.iter().filter(|e| e.abs() <= 1e-6).count();
    let neutral = if ones.len() == 1 && zeros == d - 1 { Some(ones[0]) } else { None };
    Some(DjsReport {
        min_coefficient: min,
        max_imaginary: imag,
        row_sum_residual: rows,
        neutral,
        nonnegative: min >= -tol && imag <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, Family};
    use crate::hypergroup::{delsart_expectation, induced_coproduct};
    use crate::kac::group_kac;

    #[test]
    fn identity_column_and_trivial_pushforward() {
        let b = group_kac(build_family(Family::Cyclic(4)).unwrap());
        let p = delsart_expectation(&b, &[], 1e-9).unwrap();
        let h = induced_coproduct(&p, &b, false, 1e-9).unwrap();
        assert!(dual_pushforward_check(&p, &b, &h, 1e-9));
        let basis: Vec<AlgebraElement> = (0..4).map(|x| AlgebraElement::lambda(b.group(), x)).collect();
        let sc = structure_constants(&h, &basis, 1e-9).unwrap();
        assert_eq!(sc.expansion(0, 1e-12), vec![(0, 0, Complex64::new(1.0, 0.0))]);
        let djs = djs_property(&h, 1e-9).unwrap();
        assert!(djs.nonnegative && djs.neutral == Some(0), "{djs:?}");
    }

    #[test]
    fn dual_product_is_associative_with_involutive_plus() {
        let b = group_kac(build_family(Family::Dihedral(2)).unwrap());
        let p = delsart_expectation(&b, &[], 1e-9).unwrap();
        let h = induced_coproduct(&p, &b, false, 1e-9).unwrap();
        let x = DualFunctional::basis(8, 1);
        let y = DualFunctional::basis(8, 4);
        let z = DualFunctional::new(CVector::from_element(8, Complex64::new(0.5, -1.0)));
        let lhs = x.mul(&y, &h).mul(&z, &h);
        let rhs = x.mul(&y.mul(&z, &h), &h);
        assert!(lhs.distance(&rhs) < 1e-12);
        assert!(z.plus(&h).plus(&h).distance(&z) < 1e-12);
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let b = group_kac(build_family(Family::Cyclic(3)).unwrap());
        let p = delsart_expectation(&b, &[], 1e-9).unwrap();
        let h = induced_coproduct(&p, &b, false, 1e-9).unwrap();
        let one = AlgebraElement::one(b.group());
        assert!(matches!(
            structure_constants(&h, &[one.clone(), one.clone(), one], 1e-9),
            Err(Error::NotSpanning(_))
        ));
    }
}
