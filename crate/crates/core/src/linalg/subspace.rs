use super::matrix::{Matrix, SparseVec};
use super::scalar::Field;
use crate::error::{Error, Result};

/// A subspace of a coordinate space, stored by its reduced row echelon basis.
///
/// The rref basis is canonical, so two subspaces are equal exactly when their
/// basis matrices coincide. `ambient_degree` is set for subspaces of a tensor
/// power `V^{⊗n}` and is checked alongside `ambient_dim` by the lattice
/// operations.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    ambient_degree: Option<usize>,
    basis: Matrix<F>,
    pivots: Vec<usize>,
    // pivot column -> basis row
    pivot_of_col: Vec<Option<usize>>,
}

impl<F: Field> Subspace<F> {
    pub fn from_spanning(spanning: &Matrix<F>, ambient_degree: Option<usize>) -> Self {
        let rref = spanning.rref();
        let mut pivot_of_col = vec![None; spanning.cols()];
        for (r, &p) in rref.pivots.iter().enumerate() {
            pivot_of_col[p] = Some(r);
        }
        Subspace {
            ambient_degree,
            basis: rref.matrix,
            pivots: rref.pivots,
            pivot_of_col,
        }
    }

    pub fn zero(field: F, ambient_dim: usize, ambient_degree: Option<usize>) -> Self {
        Subspace {
            ambient_degree,
            basis: Matrix::zeros(field, 0, ambient_dim),
            pivots: Vec::new(),
            pivot_of_col: vec![None; ambient_dim],
        }
    }

    pub fn full(field: F, ambient_dim: usize, ambient_degree: Option<usize>) -> Self {
        Subspace {
            ambient_degree,
            basis: Matrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
            pivot_of_col: (0..ambient_dim).map(Some).collect(),
        }
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.ambient_degree = Some(degree);
        self
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_degree(&self) -> Option<usize> {
        self.ambient_degree
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch(self.ambient_dim(), other.ambient_dim()));
        }
        match (self.ambient_degree, other.ambient_degree) {
            (Some(a), Some(b)) if a != b => Err(Error::AmbientMismatch(a, b)),
            _ => Ok(()),
        }
    }

    fn merged_degree(&self, other: &Self) -> Option<usize> {
        self.ambient_degree.or(other.ambient_degree)
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is not in the span.
    ///
    /// For an rref basis the coordinate on row `k` is the entry of `v` at the
    /// `k`-th pivot, so membership reduces to one reconstruction.
    pub fn coordinates(&self, v: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        let coords: SparseVec<F::Elem> = v
            .iter()
            .filter_map(|(c, x)| self.pivot_of_col[*c].map(|r| (r, x.clone())))
            .collect();
        let rebuilt = self.basis.apply_row(&coords);
        (rebuilt.as_slice() == v).then_some(coords)
    }

    /// [`Subspace::coordinates`] for many vectors at once, with a single
    /// product for the membership check. `Err(i)` if `vs[i]` lies outside.
    pub fn coordinates_batch(&self, vs: &[SparseVec<F::Elem>]) -> std::result::Result<Vec<SparseVec<F::Elem>>, usize> {
        let coords: Vec<SparseVec<F::Elem>> = vs
            .iter()
            .map(|v| {
                v.iter()
                    .filter_map(|(c, x)| self.pivot_of_col[*c].map(|r| (r, x.clone())))
                    .collect()
            })
            .collect();
        let coord_matrix = Matrix::from_sparse_rows(self.field().clone(), self.dim(), coords);
        let rebuilt = coord_matrix.mul(&self.basis).expect("coordinates match the basis");
        if let Some(i) = rebuilt.row_vecs().iter().zip(vs).position(|(r, v)| r != v) {
            return Err(i);
        }
        Ok(coord_matrix.into_rows())
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.row_vecs().iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let stacked = self.basis.vstack(&other.basis)?;
        Ok(Self::from_spanning(&stacked, self.merged_degree(other)))
    }

    /// `a ∩ b` from the kernel of the stacked coordinate maps: the pairs
    /// `(x, y)` with `x·A + y·B = 0` give the intersection as `x·A`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let degree = self.merged_degree(other);
        if self.is_full() {
            return Ok(Self { ambient_degree: degree, ..other.clone() });
        }
        if other.is_full() {
            return Ok(Self { ambient_degree: degree, ..self.clone() });
        }
        let stacked = self.basis.vstack(&other.basis)?;
        let relations = stacked.transpose().kernel_basis();
        let k = self.dim();
        let field = self.field().clone();
        let xs: Vec<SparseVec<F::Elem>> = relations
            .basis()
            .row_vecs()
            .iter()
            .map(|r| r.iter().filter(|(c, _)| *c < k).cloned().collect())
            .collect();
        let coeffs = Matrix::from_sparse_rows(field, k, xs);
        let spanning = coeffs.mul(&self.basis)?;
        Ok(Self::from_spanning(&spanning, degree))
    }

    /// Non-pivot coordinates; their unit vectors project to a basis of the
    /// quotient of the ambient space by `self`.
    pub fn complement_section(&self) -> Vec<usize> {
        (0..self.ambient_dim()).filter(|&c| self.pivot_of_col[c].is_none()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar::{Rational, Rationals};
    use proptest::prelude::*;

    fn span(ambient: usize, vecs: &[&[i64]]) -> Subspace<Rationals> {
        let rows: Vec<Vec<Rational>> = vecs.iter().map(|v| v.iter().map(|&x| Rational::from(x)).collect()).collect();
        Subspace::from_spanning(&Matrix::from_dense(Rationals, ambient, &rows), None)
    }

    // V⊗2 with g = 2: words xx, xy, yx, yy.
    fn e(i: usize) -> Vec<i64> {
        let mut v = vec![0; 4];
        v[i] = 1;
        v
    }

    #[test]
    fn intersect_examples() {
        let s = span(4, &[&[1, 1, 0, 0], &[0, 1, 2, 0]]);
        assert_eq!(s.intersect(&s).unwrap(), s);
        let full = Subspace::full(Rationals, 4, None);
        assert_eq!(s.intersect(&full).unwrap(), s);
        let a = span(4, &[&e(0), &e(1)]);
        let b = span(4, &[&e(1), &e(3)]);
        assert_eq!(a.intersect(&b).unwrap(), span(4, &[&e(1)]));
    }

    #[test]
    fn sum_examples() {
        let s = span(4, &[&[1, 1, 0, 0]]);
        let zero = Subspace::zero(Rationals, 4, None);
        let full = Subspace::full(Rationals, 4, None);
        assert_eq!(s.sum(&zero).unwrap(), s);
        assert_eq!(s.sum(&full).unwrap(), full);
        let xx_yy = span(4, &[&e(0)]).sum(&span(4, &[&e(3)])).unwrap();
        assert_eq!(xx_yy.dim(), 2);
        assert_eq!(xx_yy, span(4, &[&e(0), &e(3)]));
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let a = Subspace::zero(Rationals, 4, Some(2));
        let b = Subspace::zero(Rationals, 8, Some(3));
        assert!(a.intersect(&b).is_err());
        assert!(a.sum(&b).is_err());
        let c = Subspace::zero(Rationals, 1, Some(2));
        let d = Subspace::zero(Rationals, 1, Some(3));
        assert!(c.intersect(&d).is_err());
    }

    #[test]
    fn complement_section_examples() {
        assert_eq!(Subspace::zero(Rationals, 2, Some(1)).complement_section(), vec![0, 1]);
        assert!(Subspace::full(Rationals, 4, Some(2)).complement_section().is_empty());
        // xy - yx: pivot at xy (index 1), leaving xx, yx, yy
        let comm = span(4, &[&[0, 1, -1, 0]]);
        assert_eq!(comm.complement_section(), vec![0, 2, 3]);
    }

    #[test]
    fn coordinates_detect_membership() {
        let s = span(4, &[&[1, 1, 0, 0], &[0, 0, 1, 2]]);
        let v = vec![(0, Rational::from(3)), (1, Rational::from(3)), (2, Rational::from(-1)), (3, Rational::from(-2))];
        let c = s.coordinates(&v).unwrap();
        assert_eq!(c, vec![(0, Rational::from(3)), (1, Rational::from(-1))]);
        assert!(!s.contains(&[(0, Rational::from(1))]));
    }

    fn arb_subspace(ambient: usize) -> impl Strategy<Value = Subspace<Rationals>> {
        proptest::collection::vec(
            proptest::collection::vec(prop_oneof![2 => Just(0i64), 1 => -2i64..3], ambient),
            0..ambient + 1,
        )
        .prop_map(move |rows| {
            let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect();
            Subspace::from_spanning(&Matrix::from_dense(Rationals, ambient, &rows), None)
        })
    }

    proptest! {
        #[test]
        fn modular_law(a in arb_subspace(6), b in arb_subspace(6)) {
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            prop_assert!(a.contains_subspace(&i) && b.contains_subspace(&i));
            prop_assert!(s.contains_subspace(&a) && s.contains_subspace(&b));
            prop_assert!(i.dim() + 6 >= a.dim() + b.dim());
        }

        #[test]
        fn canonical_under_respanning(a in arb_subspace(5), mix in proptest::collection::vec(-2i64..3, 25)) {
            // Replace the basis by a random invertible-ish recombination plus the
            // original rows; the span is unchanged, so the rref must be identical.
            let k = a.dim();
            let rows = a.basis().to_dense();
            let mut spanning = rows.clone();
            for i in 0..k {
                let combo: Vec<Rational> = (0..5).map(|c| {
                    (0..k).fold(Rational::zero(), |acc, j| &acc + &(&Rational::from(mix[(i * 5 + j) % 25]) * &rows[j][c]))
                }).collect();
                spanning.insert(0, combo);
            }
            let b = Subspace::from_spanning(&Matrix::from_dense(Rationals, 5, &spanning), None);
            prop_assert_eq!(a, b);
        }
    }
}
