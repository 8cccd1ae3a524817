//! Coefficient tensors over the group basis of `C(G)^{⊗R}`.
//!
//! Index `(g₁,…,g_R)` is stored at `Σ gₖ·N^{R-1-k}` (lexicographic). Products
//! skip exact zero coefficients, which keeps twisted coproducts cheap.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug)]
pub struct Tensor<const R: usize> {
    group: Arc<FiniteGroup>,
    coeffs: Vec<Complex64>,
}

pub type AlgebraElement = Tensor<1>;
pub type TensorElement = Tensor<2>;
pub type TripleTensor = Tensor<3>;

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<const R: usize> Tensor<R> {
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        Tensor { group: group.clone(), coeffs: vec![ZERO; group.order().pow(R as u32)] }
    }

    /// `λ(e)^{⊗R}`.
    pub fn one(group: &Arc<FiniteGroup>) -> Self {
        let mut t = Self::zero(group);
        t.coeffs[0] = ONE;
        t
    }

    pub fn basis(group: &Arc<FiniteGroup>, idx: [usize; R]) -> Self {
        let mut t = Self::zero(group);
        let k = t.flat(idx);
        t.coeffs[k] = ONE;
        t
    }

    pub fn from_coeffs(group: &Arc<FiniteGroup>, coeffs: Vec<Complex64>) -> Result<Self> {
        let want = group.order().pow(R as u32);
        if coeffs.len() != want {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a rank-{R} tensor of dimension {want}",
                coeffs.len()
            )));
        }
        Ok(Tensor { group: group.clone(), coeffs })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn flat(&self, idx: [usize; R]) -> usize {
        let n = self.group.order();
        idx.iter().fold(0, |acc, &g| acc * n + g)
    }

    #[inline]
    pub fn split(&self, mut k: usize) -> [usize; R] {
        let n = self.group.order();
        let mut out = [0; R];
        for slot in out.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        out
    }

    pub fn get(&self, idx: [usize; R]) -> Complex64 {
        self.coeffs[self.flat(idx)]
    }

    pub fn set(&mut self, idx: [usize; R], v: Complex64) {
        let k = self.flat(idx);
        self.coeffs[k] = v;
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.coeffs.iter().copied().enumerate().filter(|(_, c)| *c != ZERO)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let g = &*self.group;
        let rhs: Vec<([usize; R], Complex64)> =
            other.nonzeros().map(|(k, c)| (other.split(k), c)).collect();
        let mut out = vec![ZERO; self.coeffs.len()];
        let n = g.order();
        for (k, x) in self.nonzeros() {
            let a = self.split(k);
            for (b, y) in &rhs {
                let mut idx = 0;
                for leg in 0..R {
                    idx = idx * n + g.mul(a[leg], b[leg]);
                }
                out[idx] += x * y;
            }
        }
        Ok(Tensor { group: self.group.clone(), coeffs: out })
    }

    /// `(Σ c_g λ(g))* = Σ conj(c_g) λ(g⁻¹)` on every leg.
    pub fn adjoint(&self) -> Self {
        let g = &*self.group;
        let mut out = vec![ZERO; self.coeffs.len()];
        for (k, c) in self.nonzeros() {
            let mut idx = self.split(k);
            for x in idx.iter_mut() {
                *x = g.inv(*x);
            }
            out[self.flat(idx)] = c.conj();
        }
        Tensor { group: self.group.clone(), coeffs: out }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Tensor { group: self.group.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Euclidean norm of the coefficients, i.e. `μ(a*a)^{1/2}`.
    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        same_group(&self.group, &other.group) && self.distance(other) <= tol
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Coefficient of the identity, which is the Haar state of `C(G)^{⊗R}`.
    pub fn trace_coefficient(&self) -> Complex64 {
        self.coeffs[0]
    }
}

impl AlgebraElement {
    pub fn lambda(group: &Arc<FiniteGroup>, g: usize) -> Self {
        Self::basis(group, [g])
    }

    pub fn tensor(&self, other: &AlgebraElement) -> TensorElement {
        assert!(same_group(&self.group, &other.group), "operands belong to different groups");
        let n = self.group.order();
        let mut out = vec![ZERO; n * n];
        for (g, x) in self.nonzeros() {
            for (h, y) in other.nonzeros() {
                out[g * n + h] = x * y;
            }
        }
        Tensor { group: self.group.clone(), coeffs: out }
    }
}

impl TensorElement {
    /// Flip `Σ(x⊗y) = y⊗x`.
    pub fn flip(&self) -> Self {
        let n = self.group.order();
        let mut out = vec![ZERO; n * n];
        for (k, c) in self.nonzeros() {
            out[(k % n) * n + k / n] = c;
        }
        Tensor { group: self.group.clone(), coeffs: out }
    }

    /// `x ⊗ 1`.
    pub fn leg_left(&self) -> TripleTensor {
        let n = self.group.order();
        let mut out = vec![ZERO; n * n * n];
        for (k, c) in self.nonzeros() {
            out[k * n] = c;
        }
        Tensor { group: self.group.clone(), coeffs: out }
    }

    /// `1 ⊗ x`.
    pub fn leg_right(&self) -> TripleTensor {
        let mut out = vec![ZERO; self.coeffs.len() * self.group.order()];
        for (k, c) in self.nonzeros() {
            out[k] = c;
        }
        Tensor { group: self.group.clone(), coeffs: out }
    }

    /// Row `g` as an algebra element: `Σ_h x[g,h] λ(h)`.
    pub fn row(&self, g: usize) -> AlgebraElement {
        let n = self.group.order();
        Tensor { group: self.group.clone(), coeffs: self.coeffs[g * n..(g + 1) * n].to_vec() }
    }

    /// Multiplication map `m(x⊗y) = xy`.
    pub fn contract(&self) -> AlgebraElement {
        let g = &*self.group;
        let mut out = vec![ZERO; g.order()];
        for (k, c) in self.nonzeros() {
            let [a, b] = self.split(k);
            out[g.mul(a, b)] += c;
        }
        Tensor { group: self.group.clone(), coeffs: out }
    }
}

impl<const R: usize> Mul for &Tensor<R> {
    type Output = Tensor<R>;

    /// Panics on mixed groups; use [`Tensor::checked_mul`] to get an error.
    fn mul(self, rhs: &Tensor<R>) -> Tensor<R> {
        self.checked_mul(rhs).expect("operands belong to different groups")
    }
}

impl<const R: usize> Mul<Complex64> for &Tensor<R> {
    type Output = Tensor<R>;

    fn mul(self, rhs: Complex64) -> Tensor<R> {
        self.scale(rhs)
    }
}

impl<const R: usize> Add for &Tensor<R> {
    type Output = Tensor<R>;

    fn add(self, rhs: &Tensor<R>) -> Tensor<R> {
        assert!(same_group(&self.group, &rhs.group), "operands belong to different groups");
        Tensor {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<const R: usize> AddAssign<&Tensor<R>> for Tensor<R> {
    fn add_assign(&mut self, rhs: &Tensor<R>) {
        assert!(same_group(&self.group, &rhs.group), "operands belong to different groups");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl<const R: usize> Sub for &Tensor<R> {
    type Output = Tensor<R>;

    fn sub(self, rhs: &Tensor<R>) -> Tensor<R> {
        assert!(same_group(&self.group, &rhs.group), "operands belong to different groups");
        Tensor {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<const R: usize> Neg for &Tensor<R> {
    type Output = Tensor<R>;

    fn neg(self) -> Tensor<R> {
        Tensor { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, Family};

    fn q3() -> Arc<FiniteGroup> {
        Arc::new(build_family(Family::Quasiquaternion(3)).unwrap())
    }

    #[test]
    fn group_law() {
        let g = q3();
        for x in 0..g.order() {
            for y in 0..g.order() {
                let p = &AlgebraElement::lambda(&g, x) * &AlgebraElement::lambda(&g, y);
                assert_eq!(p.coeffs(), AlgebraElement::lambda(&g, g.mul(x, y)).coeffs());
            }
        }
    }

    #[test]
    fn adjoint_is_antilinear() {
        let g = q3();
        let a = g.find("a").unwrap();
        let x = AlgebraElement::lambda(&g, a).scale(Complex64::new(0.0, 1.0));
        let y = x.adjoint();
        assert_eq!(y.get([g.inv(a)]), Complex64::new(0.0, -1.0));
        assert_eq!(y.adjoint().coeffs(), x.coeffs());
    }

    #[test]
    fn mixed_groups_rejected() {
        let g = q3();
        let h = Arc::new(build_family(Family::Dihedral(3)).unwrap());
        let x = AlgebraElement::one(&g);
        let y = AlgebraElement::one(&h);
        assert!(matches!(x.checked_mul(&y), Err(Error::GroupMismatch)));
    }

    #[test]
    fn tensor_legs() {
        let g = q3();
        let a = AlgebraElement::lambda(&g, 1);
        let b = AlgebraElement::lambda(&g, 7);
        let t = a.tensor(&b);
        assert_eq!(t.flip().get([7, 1]), ONE);
        assert_eq!(t.leg_left().get([1, 7, 0]), ONE);
        assert_eq!(t.leg_right().get([0, 1, 7]), ONE);
        assert_eq!(t.contract().get([g.mul(1, 7)]), ONE);
    }
}
