//! Regular representation, positivity, commutants and Wedderburn blocks of
//! `*`-subalgebras of `C(G)`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::{cluster, gram_schmidt, hermitian_eigen, null_space, rank, CMatrix, CVector};
use super::tensor::{AlgebraElement, Tensor};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Largest representation dimension diagonalized directly by [`is_positive`].
pub const REGULAR_LIMIT: usize = 1024;

const CLUSTER_GAP: f64 = 1e-6;
const MAX_ATTEMPTS: usize = 12;

/// Left regular representation on `C(G)^{⊗R}`: `λ(g)` acts as the permutation
/// `h ↦ gh` on each leg.
pub fn regular_matrix<const R: usize>(a: &Tensor<R>) -> CMatrix {
    let g = &**a.group();
    let d = a.dim();
    let n = g.order();
    let mut m = CMatrix::zeros(d, d);
    for (k, c) in a.nonzeros() {
        let gi = a.split(k);
        for col in 0..d {
            let h = a.split(col);
            let mut row = 0;
            for leg in 0..R {
                row = row * n + g.mul(gi[leg], h[leg]);
            }
            m[(row, col)] += c;
        }
    }
    m
}

/// Positivity of the spectrum with the relative threshold
/// `λ_min ≥ −tol·(1 + λ_max)`. Rank-2 tensors over groups too large for the
/// regular representation are tested blockwise on `π_i ⊗ π_j`.
pub fn is_positive<const R: usize>(a: &Tensor<R>, tol: f64) -> bool {
    if a.dim() <= REGULAR_LIMIT || R != 2 {
        return is_positive_matrix(&regular_matrix(a), tol);
    }
    let dec = match BlockDecomposition::group_algebra(a.group(), tol, crate::DEFAULT_SEED) {
        Ok(d) => d,
        Err(_) => return is_positive_matrix(&regular_matrix(a), tol),
    };
    let n = a.group().order();
    let reps = dec.group_images();
    for bi in 0..dec.blocks().len() {
        for bj in 0..dec.blocks().len() {
            let (si, sj) = (dec.blocks()[bi].size, dec.blocks()[bj].size);
            let mut m = CMatrix::zeros(si * sj, si * sj);
            for (k, c) in a.nonzeros() {
                m += reps[bi][k / n].kronecker(&reps[bj][k % n]).scale_complex(c);
            }
            if !is_positive_matrix(&m, tol) {
                return false;
            }
        }
    }
    true
}

trait ScaleComplex {
    fn scale_complex(self, c: Complex64) -> Self;
}

impl ScaleComplex for CMatrix {
    fn scale_complex(mut self, c: Complex64) -> Self {
        for x in self.iter_mut() {
            *x *= c;
        }
        self
    }
}

pub fn is_positive_matrix(m: &CMatrix, tol: f64) -> bool {
    if super::dense::hermitian_deviation(m) > tol {
        return false;
    }
    if m.is_empty() {
        return true;
    }
    let (lo, hi) = super::dense::spectrum_bounds(m);
    lo >= -tol * (1.0 + hi.max(0.0))
}

/// `‖xs − sx‖∞ ≤ tol` for every `s`.
pub fn in_commutant<const R: usize>(x: &Tensor<R>, s: &[Tensor<R>], tol: f64) -> bool {
    commutant_residual(x, s) <= tol
}

pub fn commutant_residual<const R: usize>(x: &Tensor<R>, s: &[Tensor<R>]) -> f64 {
    s.iter().map(|y| x.commutator(y).norm_inf()).fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct BlockStructure {
    /// Matrix sizes `n_i`, one per simple block.
    pub sizes: Vec<usize>,
    pub central_idempotents: Vec<AlgebraElement>,
}

impl BlockStructure {
    /// Sizes in ascending order.
    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut s = self.sizes.clone();
        s.sort_unstable();
        s
    }

    pub fn dimension(&self) -> usize {
        self.sizes.iter().map(|n| n * n).sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.sizes.iter().all(|&n| n == 1)
    }
}

#[derive(Clone, Debug)]
pub struct MatrixUnitBlock {
    pub size: usize,
    /// `units[j*size + k] = e_{jk}`.
    pub units: Vec<AlgebraElement>,
}

impl MatrixUnitBlock {
    pub fn unit(&self, j: usize, k: usize) -> &AlgebraElement {
        &self.units[j * self.size + k]
    }

    pub fn central_idempotent(&self) -> AlgebraElement {
        let mut z = self.units[0].clone();
        for j in 1..self.size {
            z += self.unit(j, j);
        }
        z
    }
}

/// Full system of matrix units for a `*`-subalgebra `B ⊂ C(G)`.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    group: Arc<FiniteGroup>,
    blocks: Vec<MatrixUnitBlock>,
}

fn to_vec(a: &AlgebraElement) -> CVector {
    CVector::from_column_slice(a.coeffs())
}

fn from_vec(group: &Arc<FiniteGroup>, v: &CVector) -> AlgebraElement {
    AlgebraElement::from_coeffs(group, v.as_slice().to_vec()).expect("length matches group")
}

/// Orthonormal basis of a span of algebra elements, as coefficient vectors.
struct Span {
    q: Vec<CVector>,
}

impl Span {
    fn new(elements: &[AlgebraElement], tol: f64) -> Self {
        let vs: Vec<CVector> = elements.iter().map(to_vec).collect();
        let (q, _) = gram_schmidt(vs.iter(), tol);
        Span { q }
    }

    fn coords(&self, v: &CVector) -> CVector {
        CVector::from_iterator(self.q.len(), self.q.iter().map(|q| q.dotc(v)))
    }

    fn residual(&self, v: &CVector) -> f64 {
        let mut w = v.clone();
        for q in &self.q {
            let p = q.dotc(&w);
            w.axpy(-p, q, Complex64::new(1.0, 0.0));
        }
        w.camax()
    }
}

/// Tracial Haar state of `C(G)` evaluated on a product: `μ(xy)`.
fn mu_product(g: &FiniteGroup, x: &AlgebraElement, y: &AlgebraElement) -> Complex64 {
    x.nonzeros().map(|(h, c)| c * y.coeffs()[g.inv(h)]).sum()
}

impl BlockDecomposition {
    /// Decomposes the `*`-algebra spanned by `basis`, after checking that the
    /// span contains `1` and is closed under products and adjoints.
    pub fn new(basis: &[AlgebraElement], tol: f64, seed: u64) -> Result<Self> {
        let group = basis
            .first()
            .ok_or_else(|| Error::NotSubalgebra("empty basis".into()))?
            .group()
            .clone();
        let span = Span::new(basis, 1e-8);
        let d = span.q.len();
        let elems: Vec<AlgebraElement> = span.q.iter().map(|v| from_vec(&group, v)).collect();

        if span.residual(&to_vec(&AlgebraElement::one(&group))) > tol {
            return Err(Error::NotSubalgebra("span does not contain the unit".into()));
        }
        for (i, x) in elems.iter().enumerate() {
            let r = span.residual(&to_vec(&x.adjoint()));
            if r > tol {
                return Err(Error::NotSubalgebra(format!("adjoint of basis element {i} leaves the span (residual {r:.3e})")));
            }
            for (j, y) in elems.iter().enumerate() {
                let r = span.residual(&to_vec(&(x * y)));
                if r > tol {
                    return Err(Error::NotSubalgebra(format!(
                        "product of basis elements {i} and {j} leaves the span (residual {r:.3e})"
                    )));
                }
            }
        }

        // Center: z = Σ c_k q_k with [z, q_i] = 0 for all i, in B-coordinates.
        let mut comm = CMatrix::zeros(d * d, d);
        for (k, x) in elems.iter().enumerate() {
            for (i, y) in elems.iter().enumerate() {
                let c = span.coords(&to_vec(&x.commutator(y)));
                comm.view_mut((i * d, k), (d, 1)).copy_from(&c);
            }
        }
        let ns = null_space(&comm, 1e-9);
        let center: Vec<AlgebraElement> = (0..ns.ncols())
            .map(|c| {
                let mut v = CVector::zeros(group.order());
                for k in 0..d {
                    v.axpy(ns[(k, c)], &span.q[k], Complex64::new(1.0, 0.0));
                }
                from_vec(&group, &v)
            })
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let idempotents = Self::central_idempotents(&group, &center, &mut rng)?;

        let mut blocks = Vec::with_capacity(idempotents.len());
        for z in &idempotents {
            let image: Vec<CVector> = elems.iter().map(|x| span.coords(&to_vec(&(z * x)))).collect();
            let m = CMatrix::from_columns(&image);
            let dim = rank(&m, 1e-8);
            let n = (dim as f64).sqrt().round() as usize;
            if n * n != dim {
                return Err(Error::Numerical(format!("block of dimension {dim} is not a square")));
            }
            let zb: Vec<AlgebraElement> = elems.iter().map(|x| z * x).collect();
            blocks.push(Self::matrix_units(&group, z, &zb, n, &mut rng)?);
        }
        blocks.sort_by_key(|b| b.size);
        Ok(BlockDecomposition { group, blocks })
    }

    /// Decomposition of the full group algebra.
    pub fn group_algebra(group: &Arc<FiniteGroup>, tol: f64, seed: u64) -> Result<Self> {
        let basis: Vec<AlgebraElement> =
            (0..group.order()).map(|g| AlgebraElement::lambda(group, g)).collect();
        Self::new(&basis, tol, seed)
    }

    fn random_combination(
        group: &Arc<FiniteGroup>,
        elems: &[AlgebraElement],
        rng: &mut ChaCha8Rng,
    ) -> AlgebraElement {
        let mut x = AlgebraElement::zero(group);
        for e in elems {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            x += &e.scale(c);
        }
        x
    }

    /// Spectral projections of `L_h` for a random self-adjoint `h`, returning
    /// `(eigenvalue, projection element)` for clusters above `floor`.
    fn spectral_elements(
        group: &Arc<FiniteGroup>,
        h: &AlgebraElement,
        floor: f64,
    ) -> Vec<AlgebraElement> {
        let (vals, vecs) = hermitian_eigen(&regular_matrix(h));
        let mut out = Vec::new();
        for r in cluster(&vals, CLUSTER_GAP) {
            if vals[r.start] < floor {
                continue;
            }
            let v = vecs.columns(r.start, r.len());
            // Column 0 of the projector V V† is the element itself.
            let p: CVector = v * v.row(0).adjoint();
            out.push(from_vec(group, &p));
        }
        out
    }

    fn central_idempotents(
        group: &Arc<FiniteGroup>,
        center: &[AlgebraElement],
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<AlgebraElement>> {
        for _ in 0..MAX_ATTEMPTS {
            let z = Self::random_combination(group, center, rng);
            let h = (&z + &z.adjoint()).scale(Complex64::new(0.5, 0.0));
            let ps = Self::spectral_elements(group, &h, f64::NEG_INFINITY);
            if ps.len() == center.len() {
                return Ok(ps);
            }
        }
        Err(Error::Numerical("could not separate the central idempotents".into()))
    }

    fn matrix_units(
        group: &Arc<FiniteGroup>,
        z: &AlgebraElement,
        zb: &[AlgebraElement],
        n: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<MatrixUnitBlock> {
        if n == 1 {
            return Ok(MatrixUnitBlock { size: 1, units: vec![z.clone()] });
        }
        let half = Complex64::new(0.5, 0.0);
        for _ in 0..MAX_ATTEMPTS {
            let x = Self::random_combination(group, zb, rng);
            let h = (&x + &x.adjoint()).scale(half);
            let shift = regular_matrix(&h).norm() + 1.0;
            let h = &h + &z.scale(Complex64::new(shift, 0.0));
            let minimal = Self::spectral_elements(group, &h, 0.5);
            if minimal.len() != n {
                continue;
            }
            let y = Self::random_combination(group, zb, rng);
            let p1 = &minimal[0];
            let mut row = vec![p1.clone()];
            let mut ok = true;
            for pk in &minimal[1..] {
                let v = &(p1 * &y) * pk;
                let c = v.norm_l2().powi(2) / p1.trace_coefficient().re;
                if c < 1e-8 {
                    ok = false;
                    break;
                }
                row.push(v.scale(Complex64::new(1.0 / c.sqrt(), 0.0)));
            }
            if !ok {
                continue;
            }
            let col: Vec<AlgebraElement> = row.iter().map(|e| e.adjoint()).collect();
            let mut units = Vec::with_capacity(n * n);
            for j in 0..n {
                for k in 0..n {
                    units.push(if j == 0 {
                        row[k].clone()
                    } else if k == 0 {
                        col[j].clone()
                    } else {
                        &col[j] * &row[k]
                    });
                }
            }
            return Ok(MatrixUnitBlock { size: n, units });
        }
        Err(Error::Numerical("could not build matrix units".into()))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn blocks(&self) -> &[MatrixUnitBlock] {
        &self.blocks
    }

    pub fn structure(&self) -> BlockStructure {
        BlockStructure {
            sizes: self.blocks.iter().map(|b| b.size).collect(),
            central_idempotents: self.blocks.iter().map(|b| b.central_idempotent()).collect(),
        }
    }

    /// `π_i(a)_{jk} = μ(a e_{kj}) / μ(e_{11})`, one matrix per block.
    pub fn represent(&self, a: &AlgebraElement) -> Vec<CMatrix> {
        self.blocks
            .iter()
            .map(|b| {
                let norm = b.units[0].trace_coefficient().re;
                DMatrix::from_fn(b.size, b.size, |j, k| {
                    mu_product(&self.group, a, b.unit(k, j)) / norm
                })
            })
            .collect()
    }

    /// `π_i(λ(g))` for every block `i` and group element `g`.
    pub fn group_images(&self) -> Vec<Vec<CMatrix>> {
        let g = &*self.group;
        self.blocks
            .iter()
            .map(|b| {
                let norm = b.units[0].trace_coefficient().re;
                (0..g.order())
                    .map(|x| {
                        DMatrix::from_fn(b.size, b.size, |j, k| {
                            b.unit(k, j).coeffs()[g.inv(x)] / norm
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// Block structure of the `*`-algebra spanned by `basis`.
pub fn wedderburn(basis: &[AlgebraElement], tol: f64) -> Result<BlockStructure> {
    Ok(BlockDecomposition::new(basis, tol, crate::DEFAULT_SEED)?.structure())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, Family};

    fn grp(f: Family) -> Arc<FiniteGroup> {
        Arc::new(build_family(f).unwrap())
    }

    fn full(g: &Arc<FiniteGroup>) -> Vec<AlgebraElement> {
        (0..g.order()).map(|x| AlgebraElement::lambda(g, x)).collect()
    }

    #[test]
    fn regular_matrix_is_multiplicative() {
        let g = grp(Family::Quasiquaternion(3));
        let a = &AlgebraElement::lambda(&g, 1) + &AlgebraElement::lambda(&g, 7).scale(Complex64::new(0.5, 2.0));
        let b = &AlgebraElement::lambda(&g, 3) - &AlgebraElement::lambda(&g, 9);
        let lhs = regular_matrix(&(&a * &b));
        let rhs = regular_matrix(&a) * regular_matrix(&b);
        assert!((lhs - rhs).camax() < 1e-12);
        let id = regular_matrix(&AlgebraElement::one(&g));
        assert_eq!(id, CMatrix::identity(12, 12));
    }

    #[test]
    fn positivity_examples() {
        let g = grp(Family::Quasiquaternion(2));
        let b2 = g.find("a^2").unwrap();
        let a = g.find("a").unwrap();
        let e = AlgebraElement::one(&g);
        assert!(!is_positive(&(&AlgebraElement::lambda(&g, b2) - &e), 1e-9));
        let x = &(&e.scale(Complex64::new(2.0, 0.0)) + &AlgebraElement::lambda(&g, a))
            + &AlgebraElement::lambda(&g, g.inv(a));
        assert!(is_positive(&x, 1e-9));
    }

    #[test]
    fn full_q2_blocks() {
        let g = grp(Family::Quasiquaternion(2));
        let s = wedderburn(&full(&g), 1e-9).unwrap();
        assert_eq!(s.sorted_sizes(), vec![1, 1, 1, 1, 2]);
        let sum = s.central_idempotents.iter().fold(AlgebraElement::zero(&g), |acc, z| &acc + z);
        assert!(sum.approx_eq(&AlgebraElement::one(&g), 1e-10));
    }

    #[test]
    fn cyclic_is_commutative() {
        let g = grp(Family::Cyclic(7));
        let s = wedderburn(&full(&g), 1e-9).unwrap();
        assert_eq!(s.sizes.len(), 7);
        assert!(s.is_commutative());
    }

    #[test]
    fn matrix_units_multiply_correctly() {
        let g = grp(Family::Symmetric(4));
        let dec = BlockDecomposition::group_algebra(&g, 1e-9, 7).unwrap();
        assert_eq!(dec.structure().sorted_sizes(), vec![1, 1, 2, 3, 3]);
        for b in dec.blocks() {
            for i in 0..b.size {
                for j in 0..b.size {
                    for k in 0..b.size {
                        let p = b.unit(i, j) * b.unit(j, k);
                        assert!(p.approx_eq(b.unit(i, k), 1e-9));
                    }
                    assert!(b.unit(i, j).adjoint().approx_eq(b.unit(j, i), 1e-9));
                }
            }
        }
        // The block representations are multiplicative.
        let (x, y) = (AlgebraElement::lambda(&g, 5), AlgebraElement::lambda(&g, 17));
        let pxy = dec.represent(&(&x * &y));
        let (px, py) = (dec.represent(&x), dec.represent(&y));
        for i in 0..pxy.len() {
            assert!((&pxy[i] - &px[i] * &py[i]).camax() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_algebra() {
        let g = grp(Family::Cyclic(5));
        let basis = vec![AlgebraElement::one(&g), AlgebraElement::lambda(&g, 1)];
        let err = wedderburn(&basis, 1e-9).unwrap_err();
        assert!(err.to_string().contains("adjoint"), "{err}");
        let cos = &AlgebraElement::lambda(&g, 1) + &AlgebraElement::lambda(&g, 4);
        let err = wedderburn(&[AlgebraElement::one(&g), cos], 1e-9).unwrap_err();
        assert!(err.to_string().contains("product"), "{err}");
    }

    #[test]
    fn tensor_positivity_blockwise_matches_regular() {
        let g = grp(Family::Alternating(5));
        let a = AlgebraElement::lambda(&g, 3);
        let x = &AlgebraElement::one(&g) + &a;
        let pos = (&x.adjoint() * &x).tensor(&AlgebraElement::one(&g));
        assert!(is_positive(&pos, 1e-9));
        let neg = AlgebraElement::one(&g).scale(Complex64::new(-1.0, 0.0)).tensor(&AlgebraElement::one(&g));
        assert!(!is_positive(&neg, 1e-9));
    }
}
