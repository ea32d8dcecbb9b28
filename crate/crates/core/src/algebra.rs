//! Graded components `A_n = V^{⊗n} / I_n` of `A = T(V)/(R)` up to a
//! truncation degree.
//!
//! The basis of `A_n` is the set of normal words: the non-pivot words of the
//! rref of `I_n` in the lexicographic word basis. Degree `n` is built from
//! degree `n-1` through
//!
//! ```text
//! A_n = (A_{n-1} ⊗ V) / span{ x·ρ : x normal of length n-s, ρ ∈ R }
//! ```
//!
//! which has the same normal words as the direct rref of `I_n` (leading
//! words of `I_{n-1} ⊗ V` are exactly the words with a non-normal prefix) but
//! never materializes `I_n`. [`ideal_component`] builds `I_n` directly and is
//! kept as an independent check.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::matrix::Accumulator;
use crate::linalg::{Field, Matrix, Rationals, SparseVec, Subspace};
use crate::presentation::Presentation;
use crate::words;

#[derive(Clone, Debug)]
struct Component<F: Field> {
    normal_words: Vec<usize>,
    // word index -> position among normal words
    normal_pos: Vec<Option<usize>>,
    // word index -> normal form in A_n coordinates
    reduce: Vec<SparseVec<F::Elem>>,
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra<F: Field> {
    field: F,
    presentation: Presentation,
    relations: Subspace<F>,
    max_degree: usize,
    components: Vec<Component<F>>,
}

impl<F: Field> GradedAlgebra<F> {
    pub fn new(presentation: &Presentation, field: F, max_degree: usize) -> Result<Self> {
        let relations = presentation.relations_over(&field)?;
        let g = presentation.num_generators();
        let s = presentation.degree();
        let mut components: Vec<Component<F>> = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let c = if n < s {
                free_component(&field, g, n)
            } else {
                next_component(&field, g, s, &relations, &components[n - 1], &components[n - s])
            };
            components.push(c);
        }
        Ok(GradedAlgebra {
            field,
            presentation: presentation.clone(),
            relations,
            max_degree,
            components,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn relations(&self) -> &Subspace<F> {
        &self.relations
    }

    pub fn num_generators(&self) -> usize {
        self.presentation.num_generators()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            return Err(Error::DegreeOverflow {
                requested: n,
                max: self.max_degree,
            });
        }
        Ok(())
    }

    /// `dim A_n`; panics beyond the truncation degree.
    pub fn dim(&self, n: usize) -> usize {
        self.components[n].normal_words.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.normal_words.len()).collect()
    }

    pub fn normal_words(&self, n: usize) -> &[usize] {
        &self.components[n].normal_words
    }

    pub fn normal_position(&self, n: usize, word: usize) -> Option<usize> {
        self.components[n].normal_pos[word]
    }

    /// Normal form of a word of length `n` in the basis of `A_n`.
    pub fn reduce_word(&self, n: usize, word: usize) -> &[(usize, F::Elem)] {
        &self.components[n].reduce[word]
    }

    /// The projection `V^{⊗n} → A_n`, one image per row.
    pub fn reduce_matrix(&self, n: usize) -> Result<Matrix<F>> {
        self.check_degree(n)?;
        let rows = self.components[n].reduce.clone();
        Ok(Matrix::from_sparse_rows(self.field.clone(), self.dim(n), rows))
    }

    /// `u · a · t` for words `u`, `t` and the `a_pos`-th basis element of `A_p`.
    pub fn sandwich(&self, u: usize, u_len: usize, p: usize, a_pos: usize, t: usize, t_len: usize) -> &[(usize, F::Elem)] {
        let g = self.num_generators();
        let a = self.components[p].normal_words[a_pos];
        let w = words::concat(words::concat(u, a, p, g), t, t_len, g);
        self.reduce_word(u_len + p + t_len, w)
    }

    /// Product of basis elements `a ∈ A_p`, `b ∈ A_q`.
    pub fn mul_basis(&self, p: usize, a_pos: usize, q: usize, b_pos: usize) -> &[(usize, F::Elem)] {
        let b = self.components[q].normal_words[b_pos];
        self.sandwich(0, 0, p, a_pos, b, q)
    }

    /// The multiplication `A_q ⊗ V^{⊗t} → A_{q+t}`, `(a, w) ↦ a·w`, with rows
    /// ordered as `a_pos * g^t + w`.
    pub fn left_mult_into(&self, t: usize, q: usize) -> Result<Matrix<F>> {
        self.check_degree(q + t)?;
        let g = self.num_generators();
        let gt = words::pow(g, t);
        let rows = (0..self.dim(q))
            .flat_map(|a| (0..gt).map(move |w| (a, w)))
            .map(|(a, w)| self.sandwich(0, 0, q, a, w, t).to_vec())
            .collect();
        Ok(Matrix::from_sparse_rows(self.field.clone(), self.dim(q + t), rows))
    }
}

fn free_component<F: Field>(field: &F, g: usize, n: usize) -> Component<F> {
    let size = words::pow(g, n);
    Component {
        normal_words: (0..size).collect(),
        normal_pos: (0..size).map(Some).collect(),
        reduce: (0..size).map(|w| vec![(w, field.one())]).collect(),
    }
}

fn next_component<F: Field>(
    field: &F,
    g: usize,
    s: usize,
    relations: &Subspace<F>,
    prev: &Component<F>,
    shifted: &Component<F>,
) -> Component<F> {
    let cols = prev.normal_words.len() * g;
    let gs = words::pow(g, s);

    // The relations x·ρ, written in A_{n-1} ⊗ V coordinates `pos * g + v`.
    let spanning: Vec<SparseVec<F::Elem>> = shifted
        .normal_words
        .par_iter()
        .map_init(
            || Accumulator::new(field, cols),
            |acc, &x| {
                relations
                    .basis()
                    .row_vecs()
                    .iter()
                    .map(|rho| {
                        for (w, c) in rho {
                            let full = x * gs + w;
                            let (prefix, last) = (full / g, full % g);
                            for (pos, r) in &prev.reduce[prefix] {
                                acc.add(field, pos * g + last, &field.mul(c, r));
                            }
                        }
                        acc.take(field)
                    })
                    .collect::<Vec<_>>()
            },
        )
        .flatten()
        .collect();
    let quotient = Subspace::from_spanning(&Matrix::from_sparse_rows(field.clone(), cols, spanning), None);

    let free_cols = quotient.complement_section();
    let mut col_pos = vec![None; cols];
    for (k, &c) in free_cols.iter().enumerate() {
        col_pos[c] = Some(k);
    }
    // image of each A_{n-1} ⊗ V basis vector in A_n
    let mut qmap: Vec<SparseVec<F::Elem>> = col_pos.iter().map(|p| p.map_or_else(Vec::new, |k| vec![(k, field.one())])).collect();
    for (row, &pivot) in quotient.basis().row_vecs().iter().zip(quotient.pivots()) {
        qmap[pivot] = row[1..]
            .iter()
            .map(|(c, v)| (col_pos[*c].expect("rref row entry off the pivots"), field.neg(v)))
            .collect();
    }

    let normal_words: Vec<usize> = free_cols
        .iter()
        .map(|&c| prev.normal_words[c / g] * g + c % g)
        .collect();
    let num_words = prev.reduce.len() * g;
    let mut normal_pos = vec![None; num_words];
    for (k, &w) in normal_words.iter().enumerate() {
        normal_pos[w] = Some(k);
    }
    let dim = normal_words.len();
    let reduce = (0..num_words)
        .into_par_iter()
        .map_init(
            || Accumulator::new(field, dim),
            |acc, w| {
                let (prefix, last) = (w / g, w % g);
                for (pos, c) in &prev.reduce[prefix] {
                    acc.add_scaled(field, c, &qmap[pos * g + last]);
                }
                acc.take(field)
            },
        )
        .collect();

    Component {
        normal_words,
        normal_pos,
        reduce,
    }
}

/// `Σ_{i+j=n-s} V^{⊗i} ⊗ R ⊗ V^{⊗j}` as a canonical subspace of `V^{⊗n}`,
/// built directly from all shifted copies of `R`.
pub fn ideal_component<F: Field>(presentation: &Presentation, field: &F, n: usize) -> Result<Subspace<F>> {
    let g = presentation.num_generators();
    let s = presentation.degree();
    let ambient = words::pow(g, n);
    if n < s {
        return Ok(Subspace::zero(field.clone(), ambient, Some(n)));
    }
    let relations = presentation.relations_over(field)?;
    let mut rows = Vec::new();
    for i in 0..=n - s {
        let j = n - s - i;
        for left in 0..words::pow(g, i) {
            for right in 0..words::pow(g, j) {
                for rho in relations.basis().row_vecs() {
                    let row: SparseVec<F::Elem> = rho
                        .iter()
                        .map(|(w, c)| (words::concat(words::concat(left, *w, s, g), right, j, g), c.clone()))
                        .collect();
                    rows.push(row);
                }
            }
        }
    }
    let spanning = Matrix::from_entries(field.clone(), ambient, rows);
    Ok(Subspace::from_spanning(&spanning, Some(n)))
}

/// `[dim A_0, …, dim A_D]` over the rationals.
pub fn algebra_dims(presentation: &Presentation, max_degree: usize) -> Result<Vec<usize>> {
    Ok(GradedAlgebra::new(presentation, Rationals, max_degree)?.dims())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rational};
    use rand::SeedableRng;

    fn parse(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    fn plane() -> Presentation {
        parse("generators = x, y\ndegree = 2\nrel: x*y - y*x\n")
    }

    fn cubic() -> Presentation {
        parse("generators = x\ndegree = 3\nrel: x*x*x\n")
    }

    #[test]
    fn ideal_component_examples() {
        let p = plane();
        assert_eq!(ideal_component(&p, &Rationals, 1).unwrap().dim(), 0);
        assert_eq!(ideal_component(&p, &Rationals, 2).unwrap(), p.relations().clone());
        assert_eq!(ideal_component(&p, &Rationals, 3).unwrap().dim(), 4);
    }

    #[test]
    fn dims_examples() {
        let free = Presentation::new(vec!["x".into(), "y".into()], 2, vec![]).unwrap();
        assert_eq!(algebra_dims(&free, 3).unwrap(), vec![1, 2, 4, 8]);
        assert_eq!(algebra_dims(&cubic(), 4).unwrap(), vec![1, 1, 1, 0, 0]);
        assert_eq!(algebra_dims(&plane(), 6).unwrap(), vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn left_mult_examples() {
        let a = GradedAlgebra::new(&cubic(), Rationals, 4).unwrap();
        assert_eq!(a.left_mult_into(0, 2).unwrap(), Matrix::identity(Rationals, 1));
        // x^2 · x = 0
        assert!(a.left_mult_into(1, 2).unwrap().is_zero());

        let a = GradedAlgebra::new(&plane(), Rationals, 3).unwrap();
        let m = a.left_mult_into(1, 1).unwrap();
        // rows: (x, x), (x, y), (y, x), (y, y)
        assert_eq!(m.row(1), m.row(2));
        assert_ne!(m.row(0), m.row(1));
        assert!(a.check_degree(4).is_err());
        assert!(a.left_mult_into(2, 2).is_err());
    }

    fn random_presentations() -> Vec<Presentation> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let mut out = vec![plane(), cubic(), Presentation::yang_mills(2).unwrap()];
        for (g, s) in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
            for _ in 0..3 {
                let dim = rand::Rng::gen_range(&mut rng, 0..=words::pow(g, s));
                out.push(Presentation::random(g, s, dim, &mut rng).unwrap());
            }
        }
        out
    }

    #[test]
    fn incremental_matches_direct_ideal() {
        for p in random_presentations() {
            let g = p.num_generators();
            let d = 5;
            let a = GradedAlgebra::new(&p, Rationals, d).unwrap();
            for n in 0..=d {
                let ideal = ideal_component(&p, &Rationals, n).unwrap();
                assert_eq!(a.dim(n) + ideal.dim(), words::pow(g, n), "{p}");
                assert_eq!(a.normal_words(n), ideal.complement_section().as_slice());
                // the projection kills the ideal and fixes normal words
                let red = a.reduce_matrix(n).unwrap();
                assert!(ideal.basis().mul(&red).unwrap().is_zero());
                for (k, &w) in a.normal_words(n).iter().enumerate() {
                    assert_eq!(a.reduce_word(n, w), &[(k, Rational::one())]);
                }
            }
        }
    }

    #[test]
    fn reduction_is_associative() {
        for p in random_presentations() {
            let g = p.num_generators();
            let d = 5;
            let a = GradedAlgebra::new(&p, Rationals, d).unwrap();
            for n in 0..=d {
                for k in 0..=n {
                    // reduce(reduce(u)·v) = reduce(u·v)
                    for u in 0..words::pow(g, k) {
                        for v in 0..words::pow(g, n - k) {
                            let direct = a.reduce_word(n, words::concat(u, v, n - k, g)).to_vec();
                            let mut acc = Accumulator::new(&Rationals, a.dim(n));
                            for (pos, c) in a.reduce_word(k, u) {
                                acc.add_scaled(&Rationals, c, a.sandwich(0, 0, k, *pos, v, n - k));
                            }
                            assert_eq!(acc.take(&Rationals), direct);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ideal_is_monotone() {
        for p in random_presentations().into_iter().take(8) {
            let g = p.num_generators();
            for n in 0..4 {
                let small = ideal_component(&p, &Rationals, n).unwrap();
                let big = ideal_component(&p, &Rationals, n + 1).unwrap();
                for row in small.basis().row_vecs() {
                    for v in 0..g {
                        let right: SparseVec<Rational> = row.iter().map(|(w, c)| (w * g + v, c.clone())).collect();
                        let left: SparseVec<Rational> =
                            row.iter().map(|(w, c)| (v * words::pow(g, n) + w, c.clone())).collect();
                        assert!(big.contains(&right) && big.contains(&left));
                    }
                }
            }
        }
    }

    #[test]
    fn prime_field_reduces_canonical_relations() {
        let p = parse("generators = x, y\ndegree = 2\nrel: x*x + 3*y*y\nrel: 2*x*y\n");
        let a = GradedAlgebra::new(&p, PrimeField::new(3).unwrap(), 3).unwrap();
        // over F_3 the relations are x*x and x*y
        assert_eq!(a.dims(), vec![1, 2, 2, 2]);
        let q = parse("generators = x, y\ndegree = 2\nrel: x*x + 1/3*x*y\n");
        assert!(GradedAlgebra::new(&q, PrimeField::new(3).unwrap(), 3).is_err());
        assert!(GradedAlgebra::new(&q, PrimeField::new(5).unwrap(), 3).is_ok());
    }
}
