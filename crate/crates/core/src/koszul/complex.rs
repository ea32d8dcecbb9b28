use rayon::prelude::*;
use serde::Serialize;

use super::engine::KoszulEngine;
use crate::error::{Error, Result};
use crate::graded_map::GradedLinearMap;
use crate::homology::HomologyTable;
use crate::linalg::Field;

/// `K_i = A ⊗ J_{ν(i)} ⊗ A` for `i ≤ max_index` with `d'_i : K_i → K_{i-1}`
/// and the augmentation `μ : K_0 → A`.
#[derive(Clone, Debug)]
pub struct BimoduleKoszulComplex<F: Field> {
    term_dims: Vec<Vec<usize>>,
    differentials: Vec<GradedLinearMap<F>>,
    augmentation: GradedLinearMap<F>,
}

impl<F: Field> BimoduleKoszulComplex<F> {
    pub fn max_index(&self) -> usize {
        self.term_dims.len() - 1
    }

    /// Dimensions of `K_i` per internal degree.
    pub fn term_dims(&self, i: usize) -> &[usize] {
        &self.term_dims[i]
    }

    /// `d'_i` for `1 ≤ i ≤ max_index`.
    pub fn differential(&self, i: usize) -> &GradedLinearMap<F> {
        &self.differentials[i - 1]
    }

    pub fn augmentation(&self) -> &GradedLinearMap<F> {
        &self.augmentation
    }

    /// Indices `i` where `d'_i ∘ d'_{i+1} ≠ 0`.
    pub fn square_failures(&self) -> Result<Vec<usize>> {
        let failures = (1..self.max_index())
            .into_par_iter()
            .map(|i| Ok((i, self.differential(i + 1).then(self.differential(i))?.is_zero())))
            .collect::<Result<Vec<_>>>()?;
        Ok(failures.into_iter().filter(|(_, ok)| !ok).map(|(i, _)| i).collect())
    }

    /// Whether `μ ∘ d'_1 = 0`.
    pub fn augmentation_vanishes(&self) -> Result<bool> {
        if self.max_index() == 0 {
            return Ok(true);
        }
        Ok(self.differential(1).then(&self.augmentation)?.is_zero())
    }

    /// `ranks[i][m]` of the map leaving `K_i` (`μ` for `i = 0`).
    fn outgoing_ranks(&self) -> Vec<Vec<usize>> {
        (0..=self.max_index())
            .into_par_iter()
            .map(|i| if i == 0 { self.augmentation.ranks() } else { self.differential(i).ranks() })
            .collect()
    }

    /// Homology of the augmented complex at `K_0, …, K_{max_index - 1}`.
    pub fn homology(&self) -> HomologyTable {
        let top = self.max_index();
        assert!(top >= 1, "homology at K_0 needs d'_1");
        let out = self.outgoing_ranks();
        let inn: Vec<Vec<usize>> = (0..top).map(|i| out[i + 1].clone()).collect();
        HomologyTable::from_ranks(&self.term_dims[..top], &out[..top], &inn)
    }
}

/// Exactness of `K_2 → K_1 → K_0 → A → 0` at one internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceExactness {
    pub degree: usize,
    pub at_k1: bool,
    pub at_k0: bool,
    pub at_algebra: bool,
}

impl SequenceExactness {
    pub fn is_exact(&self) -> bool {
        self.at_k1 && self.at_k0 && self.at_algebra
    }
}

/// Homology of the bimodule complex over the window `(max_index, max_degree)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulityReport {
    pub homology: HomologyTable,
    pub exact: bool,
}

impl KoszulityReport {
    pub fn verdict(&self) -> String {
        let (i, d) = (self.homology.max_index, self.homology.max_degree);
        match self.homology.nonzero().first() {
            None => format!("exact through ({i}, {d})"),
            Some((hi, m, dim)) => format!("not exact: dim H_{hi} = {dim} at internal degree {m}, window ({i}, {d})"),
        }
    }
}

/// One internal degree of the Euler characteristic comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerBalance {
    pub degree: usize,
    pub alternating_sum: i64,
    pub algebra_dim: usize,
}

impl<F: Field> KoszulEngine<F> {
    /// The complex through homological index `max_index`.
    pub fn build_complex(&self, max_index: usize) -> Result<BimoduleKoszulComplex<F>> {
        self.require_degree(&format!("K_{max_index}"), self.jump(max_index))?;
        let term_dims = (0..=max_index).map(|i| self.bimodule_dims(self.jump(i))).collect();
        let differentials = (1..=max_index)
            .into_par_iter()
            .map(|i| self.d_prime(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(BimoduleKoszulComplex {
            term_dims,
            differentials,
            augmentation: self.augmentation()?,
        })
    }

    /// Exactness of the low tail at every internal degree `m ≤ D`, by
    /// comparing kernel dimensions with incoming ranks.
    pub fn check_presentation_sequence(&self) -> Result<Vec<SequenceExactness>> {
        let complex = self.build_complex(2)?;
        let mu = complex.augmentation().ranks();
        let d1 = complex.differential(1).ranks();
        let d2 = complex.differential(2).ranks();
        Ok((0..=self.max_degree())
            .map(|m| SequenceExactness {
                degree: m,
                at_k1: complex.term_dims(1)[m] - d1[m] == d2[m],
                at_k0: complex.term_dims(0)[m] - mu[m] == d1[m],
                at_algebra: mu[m] == self.algebra().dim(m),
            })
            .collect())
    }

    /// Homology `H_i(K)_m` for `i ≤ max_index`, `m ≤ D`, with `H_0` taken
    /// against `μ`. Needs `ν(max_index + 1) ≤ D`.
    pub fn koszulity_report(&self, max_index: usize) -> Result<KoszulityReport> {
        let needed = self.jump(max_index + 1);
        if needed > self.max_degree() {
            return Err(Error::WindowTooSmall {
                what: format!("homology through index {max_index}"),
                required: needed,
                got: self.max_degree(),
            });
        }
        let homology = self.build_complex(max_index + 1)?.homology();
        let exact = homology.is_zero();
        Ok(KoszulityReport { homology, exact })
    }

    /// `Σ_i (-1)^i dim (K_i)_m` against `dim A_m`, when the complex vanishes
    /// from index `max_index + 1` on. `None` if it does not vanish there.
    pub fn euler_balance(&self, max_index: usize) -> Result<Option<Vec<EulerBalance>>> {
        let next = self.jump(max_index + 1);
        self.require_degree("Euler balance", next)?;
        if self.tower().dim(next) != 0 {
            return Ok(None);
        }
        let dims: Vec<Vec<usize>> = (0..=max_index).map(|i| self.bimodule_dims(self.jump(i))).collect();
        Ok(Some(
            (0..=self.max_degree())
                .map(|m| EulerBalance {
                    degree: m,
                    alternating_sum: dims
                        .iter()
                        .enumerate()
                        .map(|(i, d)| if i % 2 == 0 { d[m] as i64 } else { -(d[m] as i64) })
                        .sum(),
                    algebra_dim: self.algebra().dim(m),
                })
                .collect(),
        ))
    }
}
