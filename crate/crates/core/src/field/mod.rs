//! Exact scalars over `Q` and `F_p`, and dense exact matrices.

mod matrix;
mod scalar;

pub use matrix::{rank_mod, Matrix, Rref};
pub(crate) use scalar::mul_mod;
pub use scalar::{Field, Scalar};

/// Rank of `m` over its field.
pub fn mat_rank(m: &Matrix) -> usize {
    m.rank()
}

/// Canonical basis of the right kernel of `m`.
pub fn mat_kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    m.kernel_basis()
}

pub fn mat_det(m: &Matrix) -> crate::Result<Scalar> {
    m.det()
}
