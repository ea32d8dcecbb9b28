//! Normalized bar complexes truncated by internal degree.
//!
//! A basis element of `A^{⊗ε} ⊗ Ā^{⊗i}` at internal degree `m` is a
//! composition `(p_0, p_1, …)` of `m` (with `p_j ≥ 1` for the `Ā` factors)
//! together with one normal word per factor. Compositions are listed in
//! lexicographic order and each block is indexed in mixed radix.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::GradedAlgebra;
use crate::homology::HomologyTable;
use crate::linalg::matrix::Accumulator;
use crate::linalg::{Field, Matrix};

/// Basis layout of one bar term at one internal degree.
struct Layout {
    blocks: Vec<Vec<usize>>,
    offsets: HashMap<Vec<usize>, usize>,
    dim: usize,
}

impl Layout {
    /// `leading` adds an `A` factor of any degree in front of `factors` `Ā` factors.
    fn new<F: Field>(alg: &GradedAlgebra<F>, leading: bool, factors: usize, m: usize) -> Layout {
        let mut blocks = Vec::new();
        let mut current = Vec::new();
        let first_min = if leading { 0 } else { 1 };
        let len = factors + usize::from(leading);
        compositions(len, m, first_min, &mut current, &mut blocks);
        let mut offsets = HashMap::with_capacity(blocks.len());
        let mut dim = 0;
        let mut kept = Vec::with_capacity(blocks.len());
        for c in blocks {
            let size: usize = c.iter().map(|&p| alg.dim(p)).product();
            if size > 0 {
                offsets.insert(c.clone(), dim);
                dim += size;
                kept.push(c);
            }
        }
        Layout { blocks: kept, offsets, dim }
    }

    fn index<F: Field>(&self, alg: &GradedAlgebra<F>, comp: &[usize], elems: &[usize]) -> usize {
        let mut idx = 0;
        for (&p, &e) in comp.iter().zip(elems) {
            idx = idx * alg.dim(p) + e;
        }
        self.offsets[comp] + idx
    }
}

fn compositions(len: usize, m: usize, first_min: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == len {
        if m == 0 {
            out.push(current.clone());
        }
        return;
    }
    let min = if current.is_empty() { first_min } else { 1 };
    let rest = len - current.len() - 1;
    if m < min + rest {
        return;
    }
    for p in min..=m - rest {
        current.push(p);
        compositions(len, m - p, first_min, current, out);
        current.pop();
    }
}

/// Every tuple of basis indices for a composition, in mixed-radix order.
fn tuples<F: Field>(alg: &GradedAlgebra<F>, comp: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(comp.len())];
    for &p in comp {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..alg.dim(p)).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Bar differential at internal degree `m` out of the term with `factors`
/// `Ā` factors. With `cyclic` the complex is the Hochschild complex
/// `A ⊗ Ā^{⊗i}` with `b = Σ_{j<i} (-1)^j d_j + (-1)^i d_i`, where `d_i`
/// moves the last factor to the front. Without it the complex is
/// `k ⊗ Ā^{⊗i} ⊗ k` with the inner faces only.
fn bar_differential<F: Field>(alg: &GradedAlgebra<F>, cyclic: bool, factors: usize, m: usize) -> Matrix<F> {
    let field = alg.field();
    let src = Layout::new(alg, cyclic, factors, m);
    if factors == 0 {
        return Matrix::zeros(field.clone(), src.dim, 0);
    }
    let tgt = Layout::new(alg, cyclic, factors - 1, m);
    let minus_one = field.neg(&field.one());
    let rows: Vec<_> = src
        .blocks
        .par_iter()
        .flat_map_iter(|comp| {
            let tgt = &tgt;
            let minus_one = &minus_one;
            let mut acc = Accumulator::new(field, tgt.dim);
            tuples(alg, comp).into_iter().map(move |elems| {
                let len = comp.len();
                // inner faces: multiply positions j, j+1
                for j in 0..len - 1 {
                    let sign = if j % 2 == 0 { field.one() } else { minus_one.clone() };
                    let merged = comp[j] + comp[j + 1];
                    let mut c2: Vec<usize> = comp[..j].to_vec();
                    c2.push(merged);
                    c2.extend_from_slice(&comp[j + 2..]);
                    if !tgt.offsets.contains_key(&c2) {
                        continue;
                    }
                    for (e, v) in alg.mul_basis(comp[j], elems[j], comp[j + 1], elems[j + 1]) {
                        let mut t2: Vec<usize> = elems[..j].to_vec();
                        t2.push(*e);
                        t2.extend_from_slice(&elems[j + 2..]);
                        acc.add(field, tgt.index(alg, &c2, &t2), &field.mul(&sign, v));
                    }
                }
                if cyclic {
                    // last factor times the coefficient a_0
                    let i = len - 1;
                    let sign = if i % 2 == 0 { field.one() } else { minus_one.clone() };
                    let mut c2 = vec![comp[i] + comp[0]];
                    c2.extend_from_slice(&comp[1..i]);
                    if tgt.offsets.contains_key(&c2) {
                        for (e, v) in alg.mul_basis(comp[i], elems[i], comp[0], elems[0]) {
                            let mut t2 = vec![*e];
                            t2.extend_from_slice(&elems[1..i]);
                            acc.add(field, tgt.index(alg, &c2, &t2), &field.mul(&sign, v));
                        }
                    }
                }
                acc.take(field)
            })
        })
        .collect();
    Matrix::from_sparse_rows(field.clone(), tgt.dim, rows)
}

fn bar_homology<F: Field>(alg: &GradedAlgebra<F>, cyclic: bool, max_index: usize) -> HomologyTable {
    let d = alg.max_degree();
    let cells: Vec<(usize, usize)> = (0..=max_index + 1).flat_map(|i| (0..=d).map(move |m| (i, m))).collect();
    let computed: Vec<(usize, usize)> = cells
        .par_iter()
        .map(|&(i, m)| {
            let map = bar_differential(alg, cyclic, i, m);
            (map.rows(), map.rank())
        })
        .collect();
    let at = |i: usize, m: usize| computed[i * (d + 1) + m];
    let dims: Vec<Vec<usize>> = (0..=max_index).map(|i| (0..=d).map(|m| at(i, m).0).collect()).collect();
    let out: Vec<Vec<usize>> = (0..=max_index).map(|i| (0..=d).map(|m| at(i, m).1).collect()).collect();
    let inn: Vec<Vec<usize>> = (0..=max_index).map(|i| (0..=d).map(|m| at(i + 1, m).1).collect()).collect();
    HomologyTable::from_ranks(&dims, &out, &inn)
}

/// `HH_i(A)_m` for `i ≤ max_index`, `m ≤ D`, from the normalized Hochschild complex.
pub fn bar_oracle_hh<F: Field>(alg: &GradedAlgebra<F>, max_index: usize) -> HomologyTable {
    bar_homology(alg, true, max_index)
}

/// `Tor^A_i(k, k)_m` for `i ≤ max_index`, `m ≤ D`, from the normalized bar complex.
pub fn bar_tor<F: Field>(alg: &GradedAlgebra<F>, max_index: usize) -> HomologyTable {
    bar_homology(alg, false, max_index)
}

/// `dim A_m / [A, A]_m` for every `m ≤ D`.
pub fn commutator_quotient_dims<F: Field>(alg: &GradedAlgebra<F>) -> Vec<usize> {
    let field = alg.field();
    (0..=alg.max_degree())
        .into_par_iter()
        .map(|m| {
            let mut acc = Accumulator::new(field, alg.dim(m));
            let mut rows = Vec::new();
            for p in 0..=m {
                for a in 0..alg.dim(p) {
                    for b in 0..alg.dim(m - p) {
                        acc.add_scaled(field, &field.one(), alg.mul_basis(p, a, m - p, b));
                        acc.add_scaled(field, &field.neg(&field.one()), alg.mul_basis(m - p, b, p, a));
                        rows.push(acc.take(field));
                    }
                }
            }
            alg.dim(m) - Matrix::from_sparse_rows(field.clone(), alg.dim(m), rows).rank()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rationals;
    use crate::presentation::Presentation;

    fn algebra(text: &str, d: usize) -> GradedAlgebra<Rationals> {
        GradedAlgebra::new(&Presentation::parse(text).unwrap(), Rationals, d).unwrap()
    }

    #[test]
    fn composition_counts() {
        let mut out = Vec::new();
        compositions(3, 4, 1, &mut Vec::new(), &mut out);
        assert_eq!(out.len(), 3);
        out.clear();
        compositions(2, 2, 0, &mut Vec::new(), &mut out);
        assert_eq!(out, vec![vec![0, 2], vec![1, 1]]);
    }

    #[test]
    fn bar_squares_to_zero() {
        let alg = algebra("generators = x, y\ndegree = 2\nrel: x*y - 2*y*x", 5);
        for cyclic in [false, true] {
            for i in 2..5 {
                for m in 0..=5 {
                    let d1 = bar_differential(&alg, cyclic, i, m);
                    let d0 = bar_differential(&alg, cyclic, i - 1, m);
                    assert!(d1.mul(&d0).unwrap().is_zero(), "cyclic {cyclic} i {i} m {m}");
                }
            }
        }
    }

    #[test]
    fn tor_of_polynomial_ring() {
        let alg = algebra("generators = x, y\ndegree = 2\nrel: x*y - y*x", 5);
        let tor = bar_tor(&alg, 3);
        assert_eq!(tor.nonzero(), vec![(0, 0, 1), (1, 1, 2), (2, 2, 1)]);
    }

    #[test]
    fn hh_of_truncated_polynomial() {
        // k[x]/(x³): HH_0 = A, HH_i two-dimensional for i ≥ 1
        let alg = algebra("generators = x\ndegree = 3\nrel: x*x*x", 9);
        let hh = bar_oracle_hh(&alg, 4);
        assert_eq!(hh.totals(), vec![3, 2, 2, 2, 2]);
        assert_eq!(commutator_quotient_dims(&alg), vec![1, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn hh_of_free_algebra() {
        let alg = algebra("generators = x, y\ndegree = 2", 4);
        let hh = bar_oracle_hh(&alg, 3);
        assert_eq!(hh.totals()[2..], [0, 0]);
        // HH_0: cyclic words of length m
        assert_eq!(hh.entries[0], vec![1, 2, 3, 4, 6]);
        assert_eq!(commutator_quotient_dims(&alg), hh.entries[0]);
    }
}
