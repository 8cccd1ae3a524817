//! Linear algebra over `C(G)` and its tensor powers.

mod blocks;
pub mod dense;
mod map;
mod tensor;

pub use blocks::{
    commutant_residual, in_commutant, is_positive, is_positive_matrix, regular_matrix,
    wedderburn, BlockDecomposition, BlockStructure, MatrixUnitBlock, REGULAR_LIMIT,
};
pub use dense::{CMatrix, CVector};
pub use map::{LinearMap, Space};
#[allow(unused_imports)]
pub(crate) use tensor::same_group;
pub use tensor::{AlgebraElement, Tensor, TensorElement, TripleTensor};

