//! The s-complexes `(A ⊗ J, δ_L)`, `(J ⊗ A, δ_R)`, their bimodule versions
//! and the 2-complex `K_i = A ⊗ J_{ν(i)} ⊗ A` with differential `d'`.

mod complex;
mod engine;
mod tower;

pub use complex::{BimoduleKoszulComplex, EulerBalance, KoszulityReport, SequenceExactness};
pub use engine::{jump, KoszulEngine};
pub use tower::{JTower, SplitTerm};
