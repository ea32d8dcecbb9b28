//! Sparse row-major matrices and the elimination kernels built on them.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use rayon::prelude::*;

use super::scalar::Field;
use crate::error::{Error, Result};

/// Sorted `(column, value)` pairs with no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// `y + alpha * x` for sparse vectors.
pub fn axpy<F: Field>(field: &F, y: &[(usize, F::Elem)], alpha: &F::Elem, x: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j == x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i == y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            out.push((x[j].0, field.mul(alpha, &x[j].1)));
            j += 1;
        } else {
            let v = field.add(&y[i].1, &field.mul(alpha, &x[j].1));
            if !field.is_zero(&v) {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dense scratch space for accumulating sparse linear combinations.
pub struct Accumulator<F: Field> {
    vals: Vec<F::Elem>,
    used: Vec<bool>,
    touched: Vec<usize>,
}

impl<F: Field> Accumulator<F> {
    pub fn new(field: &F, len: usize) -> Self {
        Accumulator {
            vals: vec![field.zero(); len],
            used: vec![false; len],
            touched: Vec::new(),
        }
    }

    pub fn add(&mut self, field: &F, col: usize, v: &F::Elem) {
        if self.used[col] {
            self.vals[col] = field.add(&self.vals[col], v);
        } else {
            self.used[col] = true;
            self.vals[col] = v.clone();
            self.touched.push(col);
        }
    }

    pub fn add_scaled(&mut self, field: &F, alpha: &F::Elem, x: &[(usize, F::Elem)]) {
        for (c, v) in x {
            self.add(field, *c, &field.mul(alpha, v));
        }
    }

    /// Drains the accumulated vector, leaving the scratch space clean.
    pub fn take(&mut self, field: &F) -> SparseVec<F::Elem> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &c in &self.touched {
            self.used[c] = false;
            let v = std::mem::replace(&mut self.vals[c], field.zero());
            if !field.is_zero(&v) {
                out.push((c, v));
            }
        }
        self.touched.clear();
        out
    }
}

#[derive(Clone)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F::Elem>>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.name())?;
        for (i, row) in self.data.iter().enumerate().filter(|(_, r)| !r.is_empty()) {
            write!(f, "  {i}:")?;
            for (c, v) in row {
                write!(f, " {c}:{v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let data = (0..n).map(|i| vec![(i, one.clone())]).collect();
        Matrix { field, rows: n, cols: n, data }
    }

    /// Builds a matrix from rows given in any order with possible zeros or
    /// repeated columns; repeated entries are summed.
    pub fn from_entries(field: F, cols: usize, rows: Vec<Vec<(usize, F::Elem)>>) -> Self {
        let mut acc = Accumulator::new(&field, cols);
        let data = rows
            .into_iter()
            .map(|row| {
                for (c, v) in &row {
                    assert!(*c < cols, "column {c} out of bounds ({cols})");
                    acc.add(&field, *c, v);
                }
                acc.take(&field)
            })
            .collect::<Vec<_>>();
        Matrix {
            field,
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Rows must already be sorted, in bounds and free of zeros.
    pub fn from_sparse_rows(field: F, cols: usize, data: Vec<SparseVec<F::Elem>>) -> Self {
        debug_assert!(data.iter().all(|r| {
            r.windows(2).all(|w| w[0].0 < w[1].0) && r.iter().all(|(c, v)| *c < cols && !field.is_zero(v))
        }));
        Matrix {
            field,
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_dense(field: F, cols: usize, rows: &[Vec<F::Elem>]) -> Self {
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !field.is_zero(v))
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect::<Vec<_>>();
        Matrix {
            field,
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, F::Elem)] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[SparseVec<F::Elem>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<SparseVec<F::Elem>> {
        self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> F::Elem {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        self.data
            .iter()
            .map(|r| {
                let mut d = vec![self.field.zero(); self.cols];
                for (c, v) in r {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((i, v.clone()));
            }
        }
        Matrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Standard product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(F::mul_matrices(self, rhs))
    }

    /// [`Matrix::mul`] by sparse accumulation in `F`.
    pub fn mul_by_accumulation(&self, rhs: &Matrix<F>) -> Matrix<F> {
        let field = &self.field;
        let data = self
            .data
            .par_iter()
            .map_init(
                || Accumulator::new(field, rhs.cols),
                |acc, row| {
                    for (k, a) in row {
                        acc.add_scaled(field, a, &rhs.data[*k]);
                    }
                    acc.take(field)
                },
            )
            .collect();
        Matrix {
            field: field.clone(),
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    fn check_same_shape(&self, rhs: &Matrix<F>) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    /// `self + alpha * rhs`.
    pub fn add_scaled(&self, alpha: &F::Elem, rhs: &Matrix<F>) -> Result<Matrix<F>> {
        self.check_same_shape(rhs)?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| axpy(&self.field, a, alpha, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, rhs: &Matrix<F>) -> Result<Matrix<F>> {
        self.add_scaled(&self.field.one(), rhs)
    }

    pub fn sub(&self, rhs: &Matrix<F>) -> Result<Matrix<F>> {
        self.add_scaled(&self.field.neg(&self.field.one()), rhs)
    }

    pub fn scale(&self, alpha: &F::Elem) -> Matrix<F> {
        let field = &self.field;
        let data = if field.is_zero(alpha) {
            vec![Vec::new(); self.rows]
        } else {
            self.data
                .iter()
                .map(|r| r.iter().map(|(c, v)| (*c, field.mul(alpha, v))).collect())
                .collect()
        };
        Matrix {
            field: field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {}",
                self.cols, below.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Ok(Matrix {
            field: self.field.clone(),
            rows: data.len(),
            cols: self.cols,
            data,
        })
    }

    /// Multiplies a sparse row vector by this matrix (`x * self`).
    pub fn apply_row(&self, x: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let mut acc = Accumulator::new(&self.field, self.cols);
        for (k, a) in x {
            acc.add_scaled(&self.field, a, &self.data[*k]);
        }
        acc.take(&self.field)
    }

    /// The unique reduced row echelon form.
    pub fn rref(&self) -> Rref<F> {
        let field = &self.field;
        let mut pivot_row: Vec<Option<usize>> = vec![None; self.cols];
        let mut echelon: Vec<SparseVec<F::Elem>> = Vec::new();

        for row in &self.data {
            let mut v = row.clone();
            let mut pos = 0;
            while pos < v.len() {
                let (c, ref a) = v[pos];
                match pivot_row[c] {
                    Some(r) => {
                        let alpha = field.neg(a);
                        // entries before `pos` are unaffected: pivot rows lead at `c`
                        let tail = axpy(field, &v[pos..], &alpha, &echelon[r]);
                        v.truncate(pos);
                        v.extend(tail);
                    }
                    None => pos += 1,
                }
            }
            if let Some((c, lead)) = v.first().cloned() {
                let inv = field.inv(&lead);
                let v = v.into_iter().map(|(j, x)| (j, field.mul(&inv, &x))).collect();
                pivot_row[c] = Some(echelon.len());
                echelon.push(v);
            }
        }

        // Back substitution from the rightmost pivot leftwards.
        let mut pivots: Vec<usize> = (0..self.cols).filter(|&c| pivot_row[c].is_some()).collect();
        for &p in pivots.iter().rev() {
            let r = pivot_row[p].unwrap();
            let mut v = std::mem::take(&mut echelon[r]);
            let mut pos = 1;
            while pos < v.len() {
                let c = v[pos].0;
                match pivot_row[c] {
                    Some(r2) => {
                        let alpha = field.neg(&v[pos].1);
                        let tail = axpy(field, &v[pos..], &alpha, &echelon[r2]);
                        v.truncate(pos);
                        v.extend(tail);
                    }
                    None => pos += 1,
                }
            }
            echelon[r] = v;
        }

        pivots.sort_unstable();
        let data: Vec<_> = pivots
            .iter()
            .map(|&p| std::mem::take(&mut echelon[pivot_row[p].unwrap()]))
            .collect();
        let rank = data.len();
        Rref {
            matrix: Matrix {
                field: field.clone(),
                rows: rank,
                cols: self.cols,
                data,
            },
            pivots,
            rank,
        }
    }

    /// Rank by sparse elimination with a minimum-fill pivot heuristic
    /// (shortest remaining row, sparsest column within it).
    pub fn rank(&self) -> usize {
        sparse_rank(&self.field, self.cols, self.data.clone())
    }

    /// Dimension of `{x : x * self = 0}`; for a map stored one image per row
    /// this is the kernel of the map.
    pub fn left_nullity(&self) -> usize {
        self.rows - self.rank()
    }

    /// Basis of `{x : self * x = 0}` as a canonical subspace of the column space.
    pub fn kernel_basis(&self) -> super::subspace::Subspace<F> {
        F::kernel(self)
    }

    /// [`Matrix::kernel_basis`] by row reduction over `F` itself.
    pub fn kernel_by_elimination(&self) -> super::subspace::Subspace<F> {
        let rref = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &rref.pivots {
            is_pivot[p] = true;
        }
        let field = &self.field;
        let mut kernel: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.cols];
        for c in 0..self.cols {
            if !is_pivot[c] {
                kernel[c].push((c, field.one()));
            }
        }
        for (row, &p) in rref.matrix.data.iter().zip(&rref.pivots) {
            for (c, v) in row.iter().skip(1) {
                kernel[*c].push((p, field.neg(v)));
            }
        }
        let rows = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut v = std::mem::take(&mut kernel[c]);
                v.sort_unstable_by_key(|(j, _)| *j);
                v
            })
            .collect();
        let spanning = Matrix::from_sparse_rows(field.clone(), self.cols, rows);
        super::subspace::Subspace::from_spanning(&spanning, None)
    }
}

fn sparse_rank<F: Field>(field: &F, cols: usize, mut rows: Vec<SparseVec<F::Elem>>) -> usize {
    let mut col_count = vec![0usize; cols];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); cols];
    let mut heap = BinaryHeap::new();
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_count[*c] += 1;
            col_rows[*c].push(i);
        }
        if !r.is_empty() {
            heap.push(Reverse((r.len(), i)));
        }
    }
    let mut active = vec![true; rows.len()];
    let mut rank = 0;

    while let Some(Reverse((len, i))) = heap.pop() {
        if !active[i] || rows[i].len() != len {
            continue;
        }
        if rows[i].is_empty() {
            active[i] = false;
            continue;
        }
        let prow = std::mem::take(&mut rows[i]);
        active[i] = false;
        rank += 1;
        for (c, _) in &prow {
            col_count[*c] -= 1;
        }
        let (pc, pv) = prow
            .iter()
            .min_by_key(|(c, _)| col_count[*c])
            .map(|(c, v)| (*c, v.clone()))
            .unwrap();
        let pinv = field.inv(&pv);

        let targets = std::mem::take(&mut col_rows[pc]);
        for r in targets {
            if !active[r] {
                continue;
            }
            let Ok(k) = rows[r].binary_search_by_key(&pc, |(c, _)| *c) else {
                continue;
            };
            let alpha = field.neg(&field.mul(&rows[r][k].1, &pinv));
            let old = std::mem::take(&mut rows[r]);
            let new = axpy(field, &old, &alpha, &prow);
            // update column bookkeeping from the merge difference
            let (mut a, mut b) = (0, 0);
            while a < old.len() || b < new.len() {
                let oc = old.get(a).map(|x| x.0);
                let nc = new.get(b).map(|x| x.0);
                match (oc, nc) {
                    (Some(x), Some(y)) if x == y => {
                        a += 1;
                        b += 1;
                    }
                    (Some(x), Some(y)) if x < y => {
                        col_count[x] -= 1;
                        a += 1;
                    }
                    (Some(x), None) => {
                        col_count[x] -= 1;
                        a += 1;
                    }
                    (_, Some(y)) => {
                        col_count[y] += 1;
                        col_rows[y].push(r);
                        b += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            if new.is_empty() {
                active[r] = false;
            } else {
                heap.push(Reverse((new.len(), r)));
            }
            rows[r] = new;
        }
    }
    rank
}
