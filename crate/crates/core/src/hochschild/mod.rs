//! Hochschild homology from the contracted complex `A ⊗ J_{ν(i)}` and the
//! bar-complex oracles it is compared against.

mod bar;

use rayon::prelude::*;
use serde::Serialize;

pub use bar::{bar_oracle_hh, bar_tor, commutator_quotient_dims};

use crate::error::{Error, Result};
use crate::graded_map::GradedLinearMap;
use crate::homology::HomologyTable;
use crate::koszul::KoszulEngine;
use crate::linalg::Field;

/// `A ⊗ J_{ν(i)}` for `i ≤ max_index` with differentials `d̃_i`.
#[derive(Clone, Debug)]
pub struct ContractedComplex<F: Field> {
    term_dims: Vec<Vec<usize>>,
    differentials: Vec<GradedLinearMap<F>>,
}

impl<F: Field> ContractedComplex<F> {
    pub fn max_index(&self) -> usize {
        self.term_dims.len() - 1
    }

    pub fn term_dims(&self, i: usize) -> &[usize] {
        &self.term_dims[i]
    }

    /// `d̃_i` for `1 ≤ i ≤ max_index`.
    pub fn differential(&self, i: usize) -> &GradedLinearMap<F> {
        &self.differentials[i - 1]
    }

    /// Indices `i` where `d̃_i ∘ d̃_{i+1} ≠ 0`.
    pub fn square_failures(&self) -> Result<Vec<usize>> {
        let checks = (1..self.max_index())
            .into_par_iter()
            .map(|i| Ok((i, self.differential(i + 1).then(self.differential(i))?.is_zero())))
            .collect::<Result<Vec<_>>>()?;
        Ok(checks.into_iter().filter(|(_, ok)| !ok).map(|(i, _)| i).collect())
    }

    /// Homology at indices `0..max_index`.
    pub fn homology(&self) -> HomologyTable {
        let top = self.max_index();
        let ranks: Vec<Vec<usize>> = (1..=top).into_par_iter().map(|i| self.differential(i).ranks()).collect();
        let zero = vec![0; self.term_dims[0].len()];
        let out: Vec<Vec<usize>> = (0..top).map(|i| if i == 0 { zero.clone() } else { ranks[i - 1].clone() }).collect();
        let inn: Vec<Vec<usize>> = (0..top).map(|i| ranks[i].clone()).collect();
        HomologyTable::from_ranks(&self.term_dims[..top], &out, &inn)
    }
}

/// Entrywise comparison of the contracted complex with the bar oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub contracted: HomologyTable,
    pub bar: HomologyTable,
    /// `(i, m, contracted, bar)` wherever they differ.
    pub diff: Vec<(usize, usize, usize, usize)>,
}

/// Whether `Tor_i(k, k)` lives only in internal degree `ν(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorConcentration {
    pub tor: HomologyTable,
    /// `(i, m, dim)` for nonzero `Tor_i` at `m ≠ ν(i)`.
    pub violations: Vec<(usize, usize, usize)>,
    pub concentrated: bool,
}

impl<F: Field> KoszulEngine<F> {
    pub fn contracted_complex(&self, max_index: usize) -> Result<ContractedComplex<F>> {
        self.require_degree(&format!("A ⊗ J at index {max_index}"), self.jump(max_index))?;
        let term_dims = (0..=max_index).map(|i| self.left_dims(self.jump(i))).collect();
        let differentials = (1..=max_index)
            .into_par_iter()
            .map(|i| self.d_tilde(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(ContractedComplex {
            term_dims,
            differentials,
        })
    }

    fn require_homology_window(&self, what: &str, max_index: usize) -> Result<()> {
        let needed = self.jump(max_index + 1);
        if needed > self.max_degree() {
            return Err(Error::WindowTooSmall {
                what: format!("{what} through index {max_index}"),
                required: needed,
                got: self.max_degree(),
            });
        }
        Ok(())
    }

    /// Homology of `(A ⊗ J_{ν(i)}, d̃)` for `i ≤ max_index`, `m ≤ D`. This is
    /// Hochschild homology when the bimodule complex is a resolution.
    pub fn hochschild_dims(&self, max_index: usize) -> Result<HomologyTable> {
        self.require_homology_window("Hochschild homology", max_index)?;
        Ok(self.contracted_complex(max_index + 1)?.homology())
    }

    pub fn bar_oracle_hh(&self, max_index: usize) -> HomologyTable {
        bar_oracle_hh(self.algebra(), max_index)
    }

    pub fn compare_with_oracle(&self, max_index: usize) -> Result<OracleComparison> {
        let contracted = self.hochschild_dims(max_index)?;
        let bar = self.bar_oracle_hh(max_index);
        let diff = contracted.diff(&bar);
        Ok(OracleComparison { contracted, bar, diff })
    }

    /// `Tor_i(k, k)` from the bar complex for `i ≤ max_index + 1`, checked for
    /// concentration in degree `ν(i)`. The extra index matches the window of
    /// [`KoszulEngine::koszulity_report`]: exactness of `K` at `i` is seen by
    /// the generators of `Tor_{i+1}`.
    pub fn tor_concentration(&self, max_index: usize) -> Result<TorConcentration> {
        self.require_homology_window("Tor concentration", max_index)?;
        let tor = bar_tor(self.algebra(), max_index + 1);
        let violations: Vec<_> = tor
            .nonzero()
            .into_iter()
            .filter(|&(i, m, _)| m != self.jump(i))
            .collect();
        let concentrated = violations.is_empty();
        Ok(TorConcentration { tor, violations, concentrated })
    }

    /// Whether `d̃_i ∘ c = c ∘ d'_i` for `i ≤ max_index`, where
    /// `c : A ⊗ J ⊗ A → A ⊗ J`, `a ⊗ j ⊗ b ↦ ba ⊗ j`. Returns the failing indices.
    pub fn contraction_failures(&self, max_index: usize) -> Result<Vec<usize>> {
        let checks = (1..=max_index)
            .into_par_iter()
            .map(|i| {
                let via_bimodule = self.d_prime(i)?.then(&self.contraction(self.jump(i - 1))?)?;
                let via_contracted = self.contraction(self.jump(i))?.then(&self.d_tilde(i)?)?;
                Ok((i, via_bimodule.sub(&via_contracted)?.is_zero()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(checks.into_iter().filter(|(_, ok)| !ok).map(|(i, _)| i).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rationals;
    use crate::presentation::Presentation;

    fn engine(text: &str, d: usize) -> KoszulEngine<Rationals> {
        KoszulEngine::rational(&Presentation::parse(text).unwrap(), d).unwrap()
    }

    #[test]
    fn truncated_cubic_hochschild() {
        let e = engine("generators = x\ndegree = 3\nrel: x*x*x", 9);
        let hh = e.hochschild_dims(2).unwrap();
        assert_eq!(hh.totals(), vec![3, 2, 2]);
        assert_eq!(hh.get(0, 0), 1);
        let cmp = e.compare_with_oracle(5).unwrap();
        assert!(cmp.diff.is_empty(), "{:?}", cmp.diff);
        assert!(e.contracted_complex(6).unwrap().square_failures().unwrap().is_empty());
    }

    #[test]
    fn free_algebra_hochschild_vanishes_above_one() {
        let e = engine("generators = x, y\ndegree = 2", 5);
        let hh = e.hochschild_dims(3).unwrap();
        assert_eq!(hh.totals()[2..], [0, 0]);
        assert_eq!(hh.entries[0], commutator_quotient_dims(e.algebra()));
    }

    #[test]
    fn polynomial_ring_matches_oracle_and_tor() {
        let e = engine("generators = x, y\ndegree = 2\nrel: x*y - y*x", 6);
        assert!(e.compare_with_oracle(2).unwrap().diff.is_empty());
        assert!(e.tor_concentration(2).unwrap().concentrated);
        assert!(e.contraction_failures(4).unwrap().is_empty());
    }

    #[test]
    fn non_koszul_tor_violation() {
        let e = engine("generators = x, y\ndegree = 3\nrel: x*y*x", 8);
        let tor = e.tor_concentration(3).unwrap();
        assert!(!tor.concentrated);
        assert!(!e.koszulity_report(3).unwrap().exact);
    }

    #[test]
    fn contraction_on_cubic_relations() {
        let e = engine("generators = x, y\ndegree = 3\nrel: x*y*y - y*x*x\nrel: x*x*y", 7);
        assert!(e.contraction_failures(3).unwrap().is_empty());
    }
}
