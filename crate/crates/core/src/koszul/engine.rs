//! Concrete matrices for the left, right and bimodule s-complexes built on
//! the tower `J`, and for the contracted maps used by Hochschild homology.
//!
//! Basis conventions at internal degree `m` (all orders lexicographic):
//!
//! - `A ⊗ J_n`: one block, `p = m - n`, index `a * dim J_n + j`;
//! - `J_n ⊗ A`: one block, `q = m - n`, index `j * dim A_q + b`;
//! - `A ⊗ J_n ⊗ A`: blocks for `p = 0..=m-n` in order, `q = m - n - p`,
//!   index `offset(p) + (a * dim J_n + j) * dim A_q + b`.

use std::sync::OnceLock;

use rayon::prelude::*;

use super::tower::JTower;
use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::graded_map::GradedLinearMap;
use crate::linalg::matrix::Accumulator;
use crate::linalg::{Field, Matrix, Rationals, SparseVec};
use crate::presentation::Presentation;

/// Homological index to tower degree: `ν(2j) = js`, `ν(2j+1) = js + 1`.
pub fn jump(i: usize, s: usize) -> usize {
    (i / 2) * s + (i % 2)
}

/// The graded algebra and its tower, truncated at the same degree.
#[derive(Clone, Debug)]
pub struct KoszulEngine<F: Field> {
    algebra: GradedAlgebra<F>,
    tower: JTower<F>,
    // δ_L, δ_R, δ'_L, δ'_R per tower degree, built on first use
    deltas: [Vec<OnceLock<GradedLinearMap<F>>>; 4],
}

#[derive(Clone, Copy)]
enum Delta {
    Left,
    Right,
    BimoduleLeft,
    BimoduleRight,
}

impl KoszulEngine<Rationals> {
    pub fn rational(presentation: &Presentation, max_degree: usize) -> Result<Self> {
        Self::new(presentation, Rationals, max_degree)
    }
}

impl<F: Field> KoszulEngine<F> {
    pub fn new(presentation: &Presentation, field: F, max_degree: usize) -> Result<Self> {
        let algebra = GradedAlgebra::new(presentation, field, max_degree)?;
        let tower = JTower::new(
            algebra.relations(),
            presentation.num_generators(),
            presentation.degree(),
            max_degree,
        );
        let deltas = std::array::from_fn(|_| (0..=max_degree).map(|_| OnceLock::new()).collect());
        Ok(KoszulEngine { algebra, tower, deltas })
    }

    pub fn algebra(&self) -> &GradedAlgebra<F> {
        &self.algebra
    }

    pub fn tower(&self) -> &JTower<F> {
        &self.tower
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn max_degree(&self) -> usize {
        self.algebra.max_degree()
    }

    /// The homogeneity degree `s`.
    pub fn s(&self) -> usize {
        self.algebra.presentation().degree()
    }

    pub fn jump(&self, i: usize) -> usize {
        jump(i, self.s())
    }

    /// Fails unless tower degree `n` lies inside the truncation window.
    pub fn require_degree(&self, what: &str, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(Error::WindowTooSmall {
                what: what.to_string(),
                required: n,
                got: self.max_degree(),
            });
        }
        Ok(())
    }

    /// Largest `i` with `ν(i) ≤ D`.
    pub fn top_index(&self) -> usize {
        let mut i = 0;
        while self.jump(i + 1) <= self.max_degree() {
            i += 1;
        }
        i
    }

    fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.max_degree()
    }

    pub fn left_dims(&self, n: usize) -> Vec<usize> {
        let jd = self.tower.dim(n);
        self.degrees()
            .map(|m| if m < n { 0 } else { self.algebra.dim(m - n) * jd })
            .collect()
    }

    pub fn right_dims(&self, n: usize) -> Vec<usize> {
        self.left_dims(n)
    }

    fn bimodule_offsets(&self, n: usize, m: usize) -> Vec<usize> {
        let jd = self.tower.dim(n);
        let mut offsets = Vec::new();
        let mut total = 0;
        if m >= n {
            for p in 0..=m - n {
                offsets.push(total);
                total += self.algebra.dim(p) * jd * self.algebra.dim(m - n - p);
            }
        }
        offsets.push(total);
        offsets
    }

    pub fn bimodule_dims(&self, n: usize) -> Vec<usize> {
        self.degrees()
            .map(|m| *self.bimodule_offsets(n, m).last().unwrap())
            .collect()
    }

    fn graded(&self, build: impl Fn(usize) -> Result<Matrix<F>> + Sync + Send) -> Result<GradedLinearMap<F>> {
        let blocks = self
            .degrees()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(build)
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedLinearMap::new(blocks))
    }

    fn check_split(&self, n: usize, l: usize, r: usize) -> Result<()> {
        self.require_degree("tower", n)?;
        if l + r > n {
            return Err(Error::Invariant(format!("cannot split {l}+{r} letters off J_{n}")));
        }
        Ok(())
    }

    /// `A ⊗ J_n → A ⊗ J_{n-l}`, `a ⊗ t·k ↦ at ⊗ k` with `|t| = l`.
    /// For `l = 1` this is the left s-complex differential `δ_L`.
    pub fn left_split(&self, n: usize, l: usize) -> Result<GradedLinearMap<F>> {
        self.check_split(n, l, 0)?;
        let split = self.tower.split(n, l, 0)?;
        let (jd, jt) = (self.tower.dim(n), self.tower.dim(n - l));
        let field = self.field();
        self.graded(|m| {
            let cols = if m < n - l { 0 } else { self.algebra.dim(m + l - n) * jt };
            if m < n {
                return Ok(Matrix::zeros(field.clone(), 0, cols));
            }
            let p = m - n;
            let mut acc = Accumulator::new(field, cols);
            let mut rows = Vec::with_capacity(self.algebra.dim(p) * jd);
            for a in 0..self.algebra.dim(p) {
                for terms in &split {
                    for term in terms {
                        for (a2, c) in self.algebra.sandwich(0, 0, p, a, term.prefix, l) {
                            acc.add(field, a2 * jt + term.mid, &field.mul(c, &term.coeff));
                        }
                    }
                    rows.push(acc.take(field));
                }
            }
            Ok(Matrix::from_sparse_rows(field.clone(), cols, rows))
        })
    }

    /// `J_n ⊗ A → J_{n-r} ⊗ A`, `k·u ⊗ b ↦ k ⊗ ub` with `|u| = r`.
    /// For `r = 1` this is the right s-complex differential `δ_R`.
    pub fn right_split(&self, n: usize, r: usize) -> Result<GradedLinearMap<F>> {
        self.check_split(n, 0, r)?;
        let split = self.tower.split(n, 0, r)?;
        let field = self.field();
        self.graded(|m| {
            let cols = if m < n - r { 0 } else { self.algebra.dim(m + r - n) * self.tower.dim(n - r) };
            if m < n {
                return Ok(Matrix::zeros(field.clone(), 0, cols));
            }
            let q = m - n;
            let bq2 = self.algebra.dim(q + r);
            let mut acc = Accumulator::new(field, cols);
            let mut rows = Vec::new();
            for terms in &split {
                for b in 0..self.algebra.dim(q) {
                    for term in terms {
                        for (b2, c) in self.algebra.sandwich(term.suffix, r, q, b, 0, 0) {
                            acc.add(field, term.mid * bq2 + b2, &field.mul(c, &term.coeff));
                        }
                    }
                    rows.push(acc.take(field));
                }
            }
            Ok(Matrix::from_sparse_rows(field.clone(), cols, rows))
        })
    }

    fn cached_delta(&self, kind: Delta, n: usize) -> Result<GradedLinearMap<F>> {
        self.check_split(n, 1, 0)?;
        let slot = &self.deltas[kind as usize][n];
        if let Some(map) = slot.get() {
            return Ok(map.clone());
        }
        let map = match kind {
            Delta::Left => self.left_split(n, 1),
            Delta::Right => self.right_split(n, 1),
            Delta::BimoduleLeft => self.bimodule_split(n, 1, 0),
            Delta::BimoduleRight => self.bimodule_split(n, 0, 1),
        }?;
        Ok(slot.get_or_init(|| map).clone())
    }

    pub fn delta_left(&self, n: usize) -> Result<GradedLinearMap<F>> {
        self.cached_delta(Delta::Left, n)
    }

    pub fn delta_right(&self, n: usize) -> Result<GradedLinearMap<F>> {
        self.cached_delta(Delta::Right, n)
    }

    /// `A ⊗ J_n ⊗ A → A ⊗ J_{n-l-r} ⊗ A`, `a ⊗ t·k·u ⊗ b ↦ at ⊗ k ⊗ ub`.
    pub fn bimodule_split(&self, n: usize, l: usize, r: usize) -> Result<GradedLinearMap<F>> {
        self.check_split(n, l, r)?;
        let split = self.tower.split(n, l, r)?;
        let nt = n - l - r;
        let jt = self.tower.dim(nt);
        let field = self.field();
        let alg = &self.algebra;
        self.graded(|m| {
            let src = self.bimodule_offsets(n, m);
            let tgt = self.bimodule_offsets(nt, m);
            let cols = *tgt.last().unwrap();
            let mut rows = Vec::with_capacity(*src.last().unwrap());
            let mut acc = Accumulator::new(field, cols);
            for p in 0..src.len() - 1 {
                let q = m - n - p;
                let bq2 = alg.dim(q + r);
                for a in 0..alg.dim(p) {
                    for terms in &split {
                        for b in 0..alg.dim(q) {
                            for term in terms {
                                let left = alg.sandwich(0, 0, p, a, term.prefix, l);
                                let right = alg.sandwich(term.suffix, r, q, b, 0, 0);
                                for (a2, c1) in left {
                                    let base = tgt[p + l] + (a2 * jt + term.mid) * bq2;
                                    let c1 = field.mul(c1, &term.coeff);
                                    for (b2, c2) in right {
                                        acc.add(field, base + b2, &field.mul(&c1, c2));
                                    }
                                }
                            }
                            rows.push(acc.take(field));
                        }
                    }
                }
            }
            Ok(Matrix::from_sparse_rows(field.clone(), cols, rows))
        })
    }

    /// `δ'_L = δ_L ⊗ 1_A` on `A ⊗ J_n ⊗ A`.
    pub fn bimodule_delta_left(&self, n: usize) -> Result<GradedLinearMap<F>> {
        self.cached_delta(Delta::BimoduleLeft, n)
    }

    /// `δ'_R = 1_A ⊗ δ_R` on `A ⊗ J_n ⊗ A`.
    pub fn bimodule_delta_right(&self, n: usize) -> Result<GradedLinearMap<F>> {
        self.cached_delta(Delta::BimoduleRight, n)
    }

    /// `A ⊗ J_n → A ⊗ J_{n-l-r}`, `a ⊗ t·k·u ↦ uat ⊗ k`: the image of
    /// [`Self::bimodule_split`] under `A ⊗_{A^e} -`, where the right factor
    /// wraps around to the left of `a`.
    pub fn contracted_split(&self, n: usize, l: usize, r: usize) -> Result<GradedLinearMap<F>> {
        self.check_split(n, l, r)?;
        let split = self.tower.split(n, l, r)?;
        let nt = n - l - r;
        let jt = self.tower.dim(nt);
        let field = self.field();
        self.graded(|m| {
            let cols = if m < nt { 0 } else { self.algebra.dim(m - nt) * jt };
            if m < n {
                return Ok(Matrix::zeros(field.clone(), 0, cols));
            }
            let p = m - n;
            let mut acc = Accumulator::new(field, cols);
            let mut rows = Vec::new();
            for a in 0..self.algebra.dim(p) {
                for terms in &split {
                    for term in terms {
                        for (a2, c) in self.algebra.sandwich(term.suffix, r, p, a, term.prefix, l) {
                            acc.add(field, a2 * jt + term.mid, &field.mul(c, &term.coeff));
                        }
                    }
                    rows.push(acc.take(field));
                }
            }
            Ok(Matrix::from_sparse_rows(field.clone(), cols, rows))
        })
    }

    /// The contraction `A ⊗ J_n ⊗ A → A ⊗ J_n`, `a ⊗ j ⊗ b ↦ ba ⊗ j`.
    pub fn contraction(&self, n: usize) -> Result<GradedLinearMap<F>> {
        self.require_degree("tower", n)?;
        let jd = self.tower.dim(n);
        let field = self.field();
        let alg = &self.algebra;
        self.graded(|m| {
            let src = self.bimodule_offsets(n, m);
            let cols = if m < n { 0 } else { alg.dim(m - n) * jd };
            let mut rows = Vec::with_capacity(*src.last().unwrap());
            for p in 0..src.len() - 1 {
                let q = m - n - p;
                for a in 0..alg.dim(p) {
                    for j in 0..jd {
                        for b in 0..alg.dim(q) {
                            rows.push(
                                alg.mul_basis(q, b, p, a)
                                    .iter()
                                    .map(|(c, v)| (c * jd + j, v.clone()))
                                    .collect::<SparseVec<_>>(),
                            );
                        }
                    }
                }
            }
            Ok(Matrix::from_sparse_rows(field.clone(), cols, rows))
        })
    }

    /// The multiplication `μ : A ⊗ A → A` on `K_0 = A ⊗ J_0 ⊗ A`.
    pub fn augmentation(&self) -> Result<GradedLinearMap<F>> {
        let field = self.field();
        let alg = &self.algebra;
        self.graded(|m| {
            let mut rows = Vec::new();
            for p in 0..=m {
                let q = m - p;
                for a in 0..alg.dim(p) {
                    for b in 0..alg.dim(q) {
                        rows.push(alg.mul_basis(p, a, q, b).to_vec());
                    }
                }
            }
            Ok(Matrix::from_sparse_rows(field.clone(), alg.dim(m), rows))
        })
    }

    /// `d'_i : K_i → K_{i-1}` on `K_i = A ⊗ J_{ν(i)} ⊗ A`: `δ'_L - δ'_R` for odd
    /// `i`, and `Σ_{k<s} δ'_L^{s-1-k} δ'_R^k` for even `i`.
    pub fn d_prime(&self, i: usize) -> Result<GradedLinearMap<F>> {
        if i == 0 {
            return Err(Error::Invariant("d'_i needs i ≥ 1".into()));
        }
        let n = self.jump(i);
        self.require_degree(&format!("d'_{i}"), n)?;
        if i % 2 == 1 {
            return self.bimodule_delta_left(n)?.sub(&self.bimodule_delta_right(n)?);
        }
        let s = self.s();
        // δ'_L and δ'_R out of degrees n, n-1, …, n-s+2
        let lefts: Vec<_> = (0..s - 1).map(|k| self.bimodule_delta_left(n - k)).collect::<Result<_>>()?;
        let rights: Vec<_> = (0..s - 1).map(|k| self.bimodule_delta_right(n - k)).collect::<Result<_>>()?;

        // tail[k] = δ'_L^{s-1-k} starting from degree n-k
        let mut tail: Vec<Option<GradedLinearMap<F>>> = vec![None; s];
        for k in (0..s - 1).rev() {
            tail[k] = Some(match &tail[k + 1] {
                Some(t) => lefts[k].then(t)?,
                None => lefts[k].clone(),
            });
        }
        let mut head: Option<GradedLinearMap<F>> = None;
        let mut total: Option<GradedLinearMap<F>> = None;
        for k in 0..s {
            let term = match (&head, &tail[k]) {
                (None, Some(t)) => t.clone(),
                (Some(h), Some(t)) => h.then(t)?,
                (Some(h), None) => h.clone(),
                (None, None) => unreachable!("s ≥ 2"),
            };
            total = Some(match total {
                Some(acc) => acc.add(&term)?,
                None => term,
            });
            if k + 1 < s {
                head = Some(match head {
                    Some(h) => h.then(&rights[k])?,
                    None => rights[k].clone(),
                });
            }
        }
        Ok(total.unwrap())
    }

    /// `d'_i` assembled from the multi-letter splits `a ⊗ t·k·u ⊗ b ↦ at ⊗ k ⊗ ub`
    /// instead of composites of single-letter maps.
    pub fn d_prime_direct(&self, i: usize) -> Result<GradedLinearMap<F>> {
        let n = self.jump(i);
        self.require_degree(&format!("d'_{i}"), n)?;
        if i % 2 == 1 {
            return self.bimodule_split(n, 1, 0)?.sub(&self.bimodule_split(n, 0, 1)?);
        }
        let s = self.s();
        let mut total = self.bimodule_split(n, s - 1, 0)?;
        for k in 1..s {
            total = total.add(&self.bimodule_split(n, s - 1 - k, k)?)?;
        }
        Ok(total)
    }

    /// The classical quadratic bimodule Koszul differential
    /// `a ⊗ x_1…x_i ⊗ b ↦ ax_1 ⊗ x_2…x_i ⊗ b + (-1)^i a ⊗ x_1…x_{i-1} ⊗ x_i b`.
    pub fn classical_quadratic(&self, i: usize) -> Result<GradedLinearMap<F>> {
        if self.s() != 2 {
            return Err(Error::Invariant("the classical differential needs s = 2".into()));
        }
        let left = self.bimodule_delta_left(i)?;
        let right = self.bimodule_delta_right(i)?;
        if i % 2 == 0 {
            left.add(&right)
        } else {
            left.sub(&right)
        }
    }

    /// `d̃_i : A ⊗ J_{ν(i)} → A ⊗ J_{ν(i-1)}`. Odd `i`: `a ⊗ v w v' ↦ av ⊗ wv' - v'a ⊗ vw`.
    /// Even `i`: the `s` terms moving `k` trailing letters in front of `a` and
    /// `s-1-k` leading letters behind it.
    pub fn d_tilde(&self, i: usize) -> Result<GradedLinearMap<F>> {
        if i == 0 {
            return Err(Error::Invariant("d̃_i needs i ≥ 1".into()));
        }
        let n = self.jump(i);
        self.require_degree(&format!("d̃_{i}"), n)?;
        if i % 2 == 1 {
            return self.contracted_split(n, 1, 0)?.sub(&self.contracted_split(n, 0, 1)?);
        }
        let s = self.s();
        let mut total = self.contracted_split(n, s - 1, 0)?;
        for k in 1..s {
            total = total.add(&self.contracted_split(n, s - 1 - k, k)?)?;
        }
        Ok(total)
    }
}
