#![allow(dead_code)]

use nkoszul::koszul::KoszulEngine;
use nkoszul::linalg::{Field, Matrix, Rationals, Subspace};
use nkoszul::{words, Presentation};

pub fn engine(text: &str, d: usize) -> KoszulEngine<Rationals> {
    KoszulEngine::rational(&Presentation::parse(text).unwrap(), d).unwrap()
}

/// `V^{⊗i} ⊗ R ⊗ V^{⊗j}` spanned word by word.
fn shifted<F: Field>(relations: &Subspace<F>, g: usize, s: usize, i: usize, j: usize) -> Subspace<F> {
    let field = relations.field().clone();
    let mut rows = Vec::new();
    for t in 0..words::pow(g, i) {
        for u in 0..words::pow(g, j) {
            for r in relations.basis().row_vecs() {
                let row: Vec<_> = r
                    .iter()
                    .map(|(w, c)| (words::concat(words::concat(t, *w, s, g), u, j, g), c.clone()))
                    .collect();
                rows.push(row);
            }
        }
    }
    let n = i + s + j;
    Subspace::from_spanning(&Matrix::from_entries(field, words::pow(g, n), rows), Some(n))
}

/// `J_n` as the plain intersection of every shift of `R`.
pub fn brute_force_j<F: Field>(relations: &Subspace<F>, g: usize, s: usize, n: usize) -> Subspace<F> {
    if n < s {
        return Subspace::full(relations.field().clone(), words::pow(g, n), Some(n));
    }
    let mut acc = shifted(relations, g, s, 0, n - s);
    for i in 1..=n - s {
        acc = acc.intersect(&shifted(relations, g, s, i, n - s - i)).unwrap();
    }
    acc
}
