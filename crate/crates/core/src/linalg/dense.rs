//! Small dense helpers: Hermitian spectra, null spaces, Gram–Schmidt.

use std::ops::Range;

use nalgebra::{ComplexField, DMatrix, DVector, RealField};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigenvalues in ascending order with matching eigenvector columns. The
/// input is symmetrized first.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(m.nrows(), order.len());
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    super::map::max_abs(&(m - m.adjoint()))
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let h = (m + m.adjoint()).scale(0.5);
    h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Eigenvalue range `(min, max)` of the Hermitian part.
pub fn spectrum_bounds(m: &CMatrix) -> (f64, f64) {
    let h = (m + m.adjoint()).scale(0.5);
    let ev = h.symmetric_eigenvalues();
    (
        ev.iter().copied().fold(f64::INFINITY, f64::min),
        ev.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    )
}

/// Splits ascending values into runs whose consecutive gaps are below `gap`.
pub fn cluster(values: &[f64], gap: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > gap {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Orthonormal basis of `{x : m x = 0}` as columns. Singular values below
/// `rel_tol·max(1, σ_max)` count as zero.
pub fn null_space<T>(m: &DMatrix<T>, rel_tol: f64) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    let (r, c) = m.shape();
    if c == 0 {
        return DMatrix::zeros(0, 0);
    }
    let padded = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.rows_mut(0, r).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thr = rel_tol * smax.max(1.0);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= thr)
        .collect();
    let mut out = DMatrix::zeros(c, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        for j in 0..c {
            out[(j, k)] = vt[(i, j)].clone().conjugate();
        }
    }
    out
}

/// Numerical rank with the same threshold policy as [`null_space`].
pub fn rank<T>(m: &DMatrix<T>, rel_tol: f64) -> usize
where
    T: ComplexField<RealField = f64>,
{
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let thr = rel_tol * smax.max(1.0);
    sv.iter().filter(|&&s| s > thr).count()
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Returns the
/// orthonormal vectors and the indices of the inputs that contributed.
pub fn gram_schmidt<'a, T>(
    vectors: impl IntoIterator<Item = &'a DVector<T>>,
    tol: f64,
) -> (Vec<DVector<T>>, Vec<usize>)
where
    T: ComplexField<RealField = f64> + 'a,
{
    let mut basis: Vec<DVector<T>> = Vec::new();
    let mut pivots = Vec::new();
    for (i, v) in vectors.into_iter().enumerate() {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let p = q.dotc(&w);
                w.axpy(-p, q, T::one());
            }
        }
        let n = w.norm();
        if n > tol {
            basis.push(w.unscale(n));
            pivots.push(i);
        }
    }
    (basis, pivots)
}

/// Entrywise largest modulus.
pub fn max_abs<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.iter().fold(0.0, |acc, c| RealField::max(acc, c.clone().modulus()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_one() {
        let m = CMatrix::from_row_slice(1, 3, &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&m * &ns)) < 1e-12);
    }

    #[test]
    fn clusters() {
        let r = cluster(&[0.0, 1e-9, 1.0, 1.0 + 1e-8, 3.0], 1e-6);
        assert_eq!(r, vec![0..2, 2..4, 4..5]);
    }

    #[test]
    fn gram_schmidt_drops_dependent() {
        let a = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let b = a.scale(2.0);
        let c = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        let (q, piv) = gram_schmidt([&a, &b, &c], 1e-10);
        assert_eq!(piv, vec![0, 2]);
        assert!((q[1].dotc(&q[0])).norm() < 1e-14);
    }

    #[test]
    fn eigen_sorted() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ]));
        let (v, _) = hermitian_eigen(&m);
        assert_eq!(v, vec![-1.0, 3.0]);
    }
}
