//! Exact computation of the bimodule Koszul complex of an s-homogeneous
//! algebra `A = T(V)/(R)`, its exactness, and Hochschild homology from the
//! contracted complex, with bar-complex oracles for cross-checking.

pub mod algebra;
pub mod error;
pub mod graded_map;
pub mod hochschild;
pub mod homology;
pub mod koszul;
pub mod linalg;
pub mod presentation;
pub mod verify;
pub mod words;

pub use algebra::GradedAlgebra;
pub use error::{Error, Result};
pub use graded_map::GradedLinearMap;
pub use homology::HomologyTable;
pub use presentation::Presentation;
