//! Dense linear maps between tensor powers of `C(G)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::tensor::Tensor;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Scalar,
    /// `C(G)^{⊗rank}` for a group of the given order.
    Tensor { order: usize, rank: usize },
}

impl Space {
    pub fn algebra(order: usize) -> Self {
        Space::Tensor { order, rank: 1 }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Space::Scalar => 1,
            Space::Tensor { order, rank } => order.pow(rank as u32),
        }
    }
}

/// Matrix acting on coefficient vectors; column `j` is the image of basis
/// vector `j`.
#[derive(Clone, Debug)]
pub struct LinearMap {
    domain: Space,
    codomain: Space,
    matrix: DMatrix<Complex64>,
}

impl LinearMap {
    pub fn new(domain: Space, codomain: Space, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != codomain.dim() || matrix.ncols() != domain.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a map of shape {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                codomain.dim(),
                domain.dim()
            )));
        }
        Ok(LinearMap { domain, codomain, matrix })
    }

    /// Builds the matrix column by column from images of basis vectors.
    pub fn from_columns(
        domain: Space,
        codomain: Space,
        mut column: impl FnMut(usize) -> Vec<Complex64>,
    ) -> Self {
        let (m, n) = (codomain.dim(), domain.dim());
        let mut matrix = DMatrix::zeros(m, n);
        for j in 0..n {
            let c = column(j);
            assert_eq!(c.len(), m, "column {j} has the wrong length");
            matrix.column_mut(j).copy_from_slice(&c);
        }
        LinearMap { domain, codomain, matrix }
    }

    pub fn identity(space: Space) -> Self {
        let n = space.dim();
        LinearMap { domain: space, codomain: space, matrix: DMatrix::identity(n, n) }
    }

    pub fn domain(&self) -> Space {
        self.domain
    }

    pub fn codomain(&self) -> Space {
        self.codomain
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply_slice(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.domain.dim(), "input length mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.codomain.dim()];
        for (j, &c) in v.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, m) in out.iter_mut().zip(self.matrix.column(j).iter()) {
                *o += c * m;
            }
        }
        out
    }

    /// Applies the map to a tensor, producing a tensor of rank `S`.
    pub fn apply<const R: usize, const S: usize>(&self, x: &Tensor<R>) -> Tensor<S> {
        let out = self.apply_slice(x.coeffs());
        Tensor::from_coeffs(x.group(), out).expect("codomain matches the output rank")
    }

    /// Scalar output of a functional.
    pub fn apply_functional<const R: usize>(&self, x: &Tensor<R>) -> Complex64 {
        assert_eq!(self.codomain, Space::Scalar, "not a functional");
        self.apply_slice(x.coeffs())[0]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.codomain != self.domain {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        Ok(LinearMap { domain: other.domain, codomain: self.codomain, matrix: &self.matrix * &other.matrix })
    }

    /// Applies an endomorphism of `C(G)` to every leg of a tensor.
    pub fn apply_legs<const R: usize>(&self, x: &Tensor<R>) -> Tensor<R> {
        assert_eq!(self.domain, self.codomain, "not an endomorphism");
        assert_eq!(self.domain.dim(), x.group().order(), "map acts on a different algebra");
        let cols: Vec<Vec<(usize, Complex64)>> = (0..self.matrix.ncols())
            .map(|j| {
                self.matrix
                    .column(j)
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                    .collect()
            })
            .collect();
        let mut cur = x.clone();
        for leg in 0..R {
            let mut next = Tensor::<R>::zero(x.group());
            for (k, c) in cur.nonzeros() {
                let mut idx = cur.split(k);
                let src = idx[leg];
                for &(i, m) in &cols[src] {
                    idx[leg] = i;
                    let f = next.flat(idx);
                    next.coeffs_mut()[f] += c * m;
                }
            }
            cur = next;
        }
        cur
    }

    pub fn distance(&self, other: &LinearMap) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    pub fn as_vector(&self, j: usize) -> DVector<Complex64> {
        self.matrix.column(j).into_owned()
    }
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, c| acc.max(c.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_is_validated() {
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert!(LinearMap::new(Space::algebra(3), Space::algebra(2), m.clone()).is_ok());
        assert!(LinearMap::new(Space::algebra(2), Space::algebra(3), m).is_err());
    }

    #[test]
    fn compose_identity() {
        let id = LinearMap::identity(Space::algebra(4));
        let f = LinearMap::from_columns(Space::algebra(4), Space::Scalar, |_| vec![Complex64::new(1.0, 0.0)]);
        assert!(f.compose(&id).unwrap().distance(&f) == 0.0);
        assert!(id.compose(&f).is_err());
    }
}
