use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

/// A degree-preserving linear map between graded spaces, one block per
/// internal degree `m = 0..=D`.
///
/// Blocks use the row convention: row `r` of `block(m)` is the image of
/// source basis vector `r`. Composition "first `self`, then `next`" is the
/// product `self.block(m) * next.block(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedLinearMap<F: Field> {
    blocks: Vec<Matrix<F>>,
}

impl<F: Field> GradedLinearMap<F> {
    pub fn new(blocks: Vec<Matrix<F>>) -> Self {
        GradedLinearMap { blocks }
    }

    pub fn zero(field: &F, source_dims: &[usize], target_dims: &[usize]) -> Self {
        assert_eq!(source_dims.len(), target_dims.len());
        let blocks = source_dims
            .iter()
            .zip(target_dims)
            .map(|(&r, &c)| Matrix::zeros(field.clone(), r, c))
            .collect();
        GradedLinearMap { blocks }
    }

    pub fn max_degree(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, m: usize) -> &Matrix<F> {
        &self.blocks[m]
    }

    pub fn blocks(&self) -> &[Matrix<F>] {
        &self.blocks
    }

    pub fn source_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Matrix::rows).collect()
    }

    pub fn target_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Matrix::cols).collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Matrix<F>, &Matrix<F>) -> Result<Matrix<F>> + Sync) -> Result<Self> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::DimensionMismatch(format!(
                "graded maps truncated at {} and {}",
                self.max_degree(),
                other.max_degree()
            )));
        }
        let blocks = self
            .blocks
            .par_iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedLinearMap { blocks })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        self.zip_with(next, |a, b| a.mul(b))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, alpha: &F::Elem) -> Self {
        GradedLinearMap {
            blocks: self.blocks.iter().map(|b| b.scale(alpha)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    /// First internal degree where the map is nonzero.
    pub fn first_nonzero_degree(&self) -> Option<usize> {
        self.blocks.iter().position(|b| !b.is_zero())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.par_iter().map(Matrix::rank).collect()
    }
}
