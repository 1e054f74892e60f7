//! Exact scalars, dense matrices, polynomials and canonical subspaces.

pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod subspace;

pub use matrix::{Matrix, Rref, Vector};
pub use poly::{fraction_free_echelon, Poly, PolyEchelon};
pub use scalar::{FieldTag, Scalar, MAX_PRIME};
pub use subspace::{quotient_dim, Subspace};
