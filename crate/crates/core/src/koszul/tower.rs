use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, SparseVec, Subspace};
use crate::words;

/// The spaces `J_n ⊆ V^{⊗n}`: all of `V^{⊗n}` below `s`, `R` at `s`, and
/// `∩_i V^{⊗i} ⊗ R ⊗ V^{⊗(n-s-i)}` above.
///
/// Above `s` each step computes `J_n = (J_{n-1} ⊗ V) ∩ (V^{⊗(n-s)} ⊗ R)`
/// inside the coordinates of `J_{n-1} ⊗ V`.
#[derive(Clone, Debug)]
pub struct JTower<F: Field> {
    g: usize,
    s: usize,
    spaces: Vec<Subspace<F>>,
}

/// One term of the factorization of a basis vector of `J_n` through
/// `V^{⊗l} ⊗ J_{n-l-r} ⊗ V^{⊗r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitTerm<E> {
    pub prefix: usize,
    pub suffix: usize,
    pub mid: usize,
    pub coeff: E,
}

type Piece<E> = (usize, usize, SparseVec<E>);

impl<F: Field> JTower<F> {
    pub fn new(relations: &Subspace<F>, g: usize, s: usize, max_degree: usize) -> Self {
        let field = relations.field().clone();
        let mut spaces: Vec<Subspace<F>> = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let ambient = words::pow(g, n);
            let space = if n < s {
                Subspace::full(field.clone(), ambient, Some(n))
            } else if n == s {
                relations.clone().with_degree(n)
            } else {
                let prev = &spaces[n - 1];
                if prev.dim() == 0 {
                    Subspace::zero(field.clone(), ambient, Some(n))
                } else {
                    next_space(prev, relations, g, s, n)
                }
            };
            spaces.push(space);
        }
        JTower { g, s, spaces }
    }

    pub fn max_degree(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn num_generators(&self) -> usize {
        self.g
    }

    pub fn degree(&self) -> usize {
        self.s
    }

    pub fn space(&self, n: usize) -> &Subspace<F> {
        &self.spaces[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.spaces[n].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    /// Writes every basis vector `j` of `J_n` as `Σ t ⊗ k ⊗ u` with `t` a word
    /// of length `l`, `u` of length `r` and `k` a basis vector of
    /// `J_{n-l-r}`. Fails if some middle part leaves `J_{n-l-r}`, which would
    /// mean the tower is not nested.
    pub fn split(&self, n: usize, l: usize, r: usize) -> Result<Vec<Vec<SplitTerm<F::Elem>>>> {
        if l + r > n {
            return Err(Error::Invariant(format!("cannot split {l}+{r} letters off degree {n}")));
        }
        let g = self.g;
        let target = &self.spaces[n - l - r];
        // (prefix, suffix, middle) for every piece, grouped by row
        let groups: Vec<Vec<Piece<F::Elem>>> = self.spaces[n]
            .basis()
            .row_vecs()
            .par_iter()
            .map(|row| {
                let mut parts: Vec<(usize, usize, usize, F::Elem)> = row
                    .iter()
                    .map(|(w, c)| {
                        let (t, mid, u) = words::split3(*w, n, l, r, g);
                        (t, u, mid, c.clone())
                    })
                    .collect();
                parts.sort_by_key(|p| (p.0, p.1, p.2));
                parts
                    .chunk_by(|a, b| (a.0, a.1) == (b.0, b.1))
                    .map(|group| (group[0].0, group[0].1, group.iter().map(|p| (p.2, p.3.clone())).collect()))
                    .collect()
            })
            .collect();
        let mids: Vec<SparseVec<F::Elem>> = groups.iter().flatten().map(|(_, _, m)| m.clone()).collect();
        let coords = target.coordinates_batch(&mids).map_err(|_| {
            Error::Invariant(format!("J_{n} is not contained in V^{l} ⊗ J_{} ⊗ V^{r}", n - l - r))
        })?;
        let mut coords = coords.into_iter();
        Ok(groups
            .iter()
            .map(|pieces| {
                pieces
                    .iter()
                    .flat_map(|(t, u, _)| {
                        coords.next().expect("one coordinate vector per piece").into_iter().map(|(k, coeff)| SplitTerm {
                            prefix: *t,
                            suffix: *u,
                            mid: k,
                            coeff,
                        })
                    })
                    .collect()
            })
            .collect())
    }
}

/// `(prev ⊗ V) ∩ (V^{⊗(n-s)} ⊗ R)`. A combination of the rows `b_k ⊗ v`
/// lies in the second space iff every length-`s` suffix slice has zero
/// residual modulo `R`; the kernel of that residual map, pushed forward, is
/// already in reduced echelon form because `prev ⊗ V` is.
fn next_space<F: Field>(prev: &Subspace<F>, relations: &Subspace<F>, g: usize, s: usize, n: usize) -> Subspace<F> {
    let field = prev.field().clone();
    let gs = words::pow(g, s);
    let free: Vec<usize> = relations.complement_section();
    let mut free_pos = vec![None; gs];
    for (i, &q) in free.iter().enumerate() {
        free_pos[q] = Some(i);
    }
    let mut pivot_rows = vec![None; gs];
    for (r, &p) in relations.pivots().iter().enumerate() {
        pivot_rows[p] = Some(r);
    }
    let tensored = tensor_right(prev, g, n);
    let residual_cols = words::pow(g, n - s) * free.len();
    let residuals: Vec<SparseVec<F::Elem>> = tensored
        .basis()
        .row_vecs()
        .par_iter()
        .map(|row| {
            let mut acc = crate::linalg::matrix::Accumulator::new(&field, residual_cols);
            for (w, a) in row {
                let (t, u) = (w / gs, w % gs);
                if let Some(q) = free_pos[u] {
                    acc.add(&field, t * free.len() + q, a);
                } else {
                    let r = pivot_rows[u].expect("every suffix is a pivot or free");
                    for (q, b) in relations.basis().row(r).iter().skip(1) {
                        let qi = free_pos[*q].expect("rref rows vanish on other pivots");
                        acc.add(&field, t * free.len() + qi, &field.neg(&field.mul(a, b)));
                    }
                }
            }
            acc.take(&field)
        })
        .collect();
    let residual = Matrix::from_sparse_rows(field.clone(), residual_cols, residuals);
    let combos = residual.transpose().kernel_basis();
    let spanning = combos.basis().mul(tensored.basis()).expect("coefficient space matches");
    Subspace::from_spanning(&spanning, Some(n))
}

fn tensor_right<F: Field>(space: &Subspace<F>, g: usize, n: usize) -> Subspace<F> {
    let rows = space
        .basis()
        .row_vecs()
        .iter()
        .flat_map(|row| (0..g).map(move |v| row.iter().map(|(w, c)| (w * g + v, c.clone())).collect()))
        .collect();
    Subspace::from_spanning(&Matrix::from_sparse_rows(space.field().clone(), words::pow(g, n), rows), Some(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Rational, Rationals};
    use crate::presentation::Presentation;
    use rand::{Rng, SeedableRng};

fn tensor_left<F: Field>(space: &Subspace<F>, g: usize, n: usize) -> Subspace<F> {
    let shift = words::pow(g, n - 1);
    let rows = (0..g)
        .flat_map(|v| {
            space
                .basis()
                .row_vecs()
                .iter()
                .map(move |row| row.iter().map(|(w, c)| (v * shift + w, c.clone())).collect())
        })
        .collect();
    Subspace::from_spanning(&Matrix::from_sparse_rows(space.field().clone(), words::pow(g, n), rows), Some(n))
}

    fn tower(text: &str, d: usize) -> JTower<Rationals> {
        let p = Presentation::parse(text).unwrap();
        JTower::new(p.relations(), p.num_generators(), p.degree(), d)
    }

    #[test]
    fn truncated_cubic_is_one_dimensional() {
        let t = tower("generators = x\ndegree = 3\nrel: x*x*x", 9);
        assert_eq!(t.dims(), vec![1; 10]);
    }

    #[test]
    fn yang_mills_dims() {
        let p = Presentation::yang_mills(3).unwrap();
        let t = JTower::new(p.relations(), 3, 3, 6);
        assert_eq!(t.dims(), vec![1, 3, 9, 3, 1, 0, 0]);
    }

    #[test]
    fn free_algebra_vanishes_from_s() {
        let t = tower("generators = x, y\ndegree = 3", 5);
        assert_eq!(t.dims(), vec![1, 2, 4, 0, 0, 0]);
    }

    #[test]
    fn matches_pairwise_intersection() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = rng.gen_range(1..=3);
            let s = rng.gen_range(2..=3);
            let dim = rng.gen_range(0..=words::pow(g, s));
            let p = Presentation::random(g, s, dim, &mut rng).unwrap();
            let t = JTower::new(p.relations(), g, s, 6);
            for n in s + 1..=6 {
                let prev = t.space(n - 1);
                let oracle = tensor_right(prev, g, n).intersect(&tensor_left(prev, g, n)).unwrap();
                assert_eq!(t.space(n).basis(), oracle.basis(), "{p} at {n}");
            }
        }
    }

    #[test]
    fn split_of_commutator() {
        let t = tower("generators = x, y\ndegree = 2\nrel: x*y - y*x", 3);
        // J_2 = span{xy - yx}; peeling the first letter: x ⊗ y - y ⊗ x
        let split = t.split(2, 1, 0).unwrap();
        assert_eq!(
            split[0],
            vec![
                SplitTerm { prefix: 0, suffix: 0, mid: 1, coeff: Rational::one() },
                SplitTerm { prefix: 1, suffix: 0, mid: 0, coeff: Rational::from(-1) },
            ]
        );
        assert!(t.split(2, 2, 1).is_err());
    }
}
