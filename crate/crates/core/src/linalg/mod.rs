//! Exact linear algebra over a [`Field`]: sparse matrices, row reduction,
//! ranks, kernels and the subspace lattice.

mod integral;
pub mod matrix;
mod modular;
pub mod scalar;
pub mod subspace;

pub use matrix::{Matrix, Rref, SparseVec};
pub use scalar::{Field, PrimeField, Rational, Rationals};
pub use subspace::Subspace;
