//! Exact dense linear algebra over GF(p) or the rationals.
//!
//! Everything here is deterministic: row reduction always takes the first
//! nonzero entry in the current column as pivot, so kernels, images and
//! intersections come out in the same basis on every run.

mod mat;
mod scalar;

pub use mat::{fixed_subspace, intersect, kernel_basis, kron, rank, Mat, Rref};
pub use scalar::{Field, Scalar};
