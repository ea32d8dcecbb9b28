//! Rational matrix products through integer arithmetic.
//!
//! Each row is scaled to integers by the lcm of its denominators, so the inner
//! products need no gcd until the final entry is formed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::matrix::{Matrix, SparseVec};
use super::scalar::{Rational, Rationals};

fn denominator_lcm<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()))
}

/// `(e, row * e)` with `e` the lcm of the row's denominators.
fn integral_row(row: &[(usize, Rational)]) -> (BigInt, Vec<(usize, BigInt)>) {
    let e = denominator_lcm(row.iter().map(|(_, v)| v));
    let scaled = row
        .iter()
        .map(|(c, v)| (*c, v.numer() * (&e / v.denom())))
        .collect();
    (e, scaled)
}

pub(crate) fn mul(a: &Matrix<Rationals>, b: &Matrix<Rationals>) -> Matrix<Rationals> {
    let rhs: Vec<(BigInt, Vec<(usize, BigInt)>)> = b.row_vecs().par_iter().map(|r| integral_row(r)).collect();
    let cols = b.cols();
    let data: Vec<SparseVec<Rational>> = a
        .row_vecs()
        .par_iter()
        .map_init(
            || (vec![BigInt::zero(); cols], vec![false; cols], Vec::new()),
            |(acc, used, touched), row| {
                // a_ik / e_k, then cleared by the row lcm
                let scaled: Vec<(usize, Rational)> = row
                    .iter()
                    .map(|(k, v)| (*k, v / &Rational::from_big(BigRational::from_integer(rhs[*k].0.clone()))))
                    .collect();
                let (d, ints) = integral_row(&scaled);
                for (k, x) in &ints {
                    for (c, y) in &rhs[*k].1 {
                        if !used[*c] {
                            used[*c] = true;
                            touched.push(*c);
                        }
                        acc[*c] += x * y;
                    }
                }
                touched.sort_unstable();
                let mut out = Vec::with_capacity(touched.len());
                for &c in touched.iter() {
                    used[c] = false;
                    let v = std::mem::take(&mut acc[c]);
                    if !v.is_zero() {
                        out.push((c, Rational::from_big(BigRational::new(v, d.clone()))));
                    }
                }
                touched.clear();
                out
            },
        )
        .collect();
    Matrix::from_sparse_rows(Rationals, cols, data)
}
