//! Multi-modular kernels over the rationals.
//!
//! The kernel is computed over several word-size prime fields, lifted by the
//! Chinese remainder theorem and rational reconstruction, and then checked
//! exactly. A lifted basis that annihilates the matrix over `Q` and has as many
//! vectors as the smallest modular kernel is the rational kernel, since the
//! kernel can only grow under reduction.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{Matrix, SparseVec};
use super::scalar::{Field, PrimeField, Rational, Rationals};
use super::subspace::Subspace;

const MAX_PRIMES: usize = 48;

/// Below this many nonzeros plain elimination is cheaper.
pub(crate) const MIN_NNZ: usize = 4096;

struct Image {
    p: u64,
    pivots: Vec<usize>,
    rows: Vec<SparseVec<u64>>,
}

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        ((1u64 << 30)..(1 << 31))
            .rev()
            .filter(|&n| n % 2 == 1 && PrimeField::new(n).is_ok())
            .take(MAX_PRIMES)
            .collect()
    })
}

fn reduce(m: &Matrix<Rationals>, fp: &PrimeField) -> Option<Matrix<PrimeField>> {
    let mut rows = Vec::with_capacity(m.rows());
    for r in m.row_vecs() {
        let mut out = Vec::with_capacity(r.len());
        for (c, v) in r {
            let x = fp.from_rational(v)?;
            if x != 0 {
                out.push((*c, x));
            }
        }
        rows.push(out);
    }
    Some(Matrix::from_sparse_rows(*fp, m.cols(), rows))
}

fn modular_image(m: &Matrix<Rationals>, p: u64) -> Option<Image> {
    let fp = PrimeField::new(p).ok()?;
    let k = reduce(m, &fp)?.kernel_by_elimination();
    Some(Image {
        p,
        pivots: k.pivots().to_vec(),
        rows: k.basis().row_vecs().to_vec(),
    })
}

/// Lifted residues of a fixed pivot pattern.
struct Lift {
    modulus: BigInt,
    entries: Vec<BTreeMap<usize, BigInt>>,
}

impl Lift {
    fn new(dim: usize) -> Self {
        Lift {
            modulus: BigInt::one(),
            entries: vec![BTreeMap::new(); dim],
        }
    }

    fn absorb(&mut self, image: &Image) {
        let p = BigInt::from(image.p);
        let fp = PrimeField::new(image.p).expect("prime");
        let m_mod_p = self.modulus.mod_floor(&p).to_u64().expect("fits");
        let m_inv = fp.inv(&m_mod_p);
        for (row, lifted) in image.rows.iter().zip(&mut self.entries) {
            let mut residues: BTreeMap<usize, u64> = row.iter().cloned().collect();
            for (c, a) in lifted.iter_mut() {
                let b = residues.remove(c).unwrap_or(0);
                *a = crt_step(a, &self.modulus, b, m_inv, &fp);
            }
            for (c, b) in residues {
                lifted.insert(c, crt_step(&BigInt::zero(), &self.modulus, b, m_inv, &fp));
            }
        }
        self.modulus *= p;
    }

    fn reconstruct(&self, cols: usize) -> Option<Matrix<Rationals>> {
        let bound = (&self.modulus >> 1u32).sqrt();
        let rows = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(c, a)| Some((*c, rational_reconstruction(a, &self.modulus, &bound)?)))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_sparse_rows(Rationals, cols, rows))
    }
}

/// `x ≡ a (mod m)`, `x ≡ b (mod p)`, `0 ≤ x < mp`.
fn crt_step(a: &BigInt, m: &BigInt, b: u64, m_inv: u64, fp: &PrimeField) -> BigInt {
    let p = BigInt::from(fp.modulus());
    let a_mod_p = a.mod_floor(&p).to_u64().expect("fits");
    let t = fp.mul(&fp.sub(&b, &a_mod_p), &m_inv);
    a + m * BigInt::from(t)
}

fn rational_reconstruction(a: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    let (n, d) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    Some(Rational::from_big(BigRational::new_raw(n, d)))
}

fn annihilates(m: &Matrix<Rationals>, basis: &Matrix<Rationals>) -> bool {
    m.mul(&basis.transpose()).map(|p| p.is_zero()).unwrap_or(false)
}

/// The rational kernel of `m`, or `None` if the lift did not certify within
/// the prime budget.
pub(crate) fn kernel(m: &Matrix<Rationals>) -> Option<Subspace<Rationals>> {
    let mut images: Vec<Image> = Vec::new();
    let mut target = 2;
    for &p in primes() {
        let Some(image) = modular_image(m, p) else { continue };
        images.push(image);
        if images.len() < target {
            continue;
        }
        target *= 2;
        // lucky primes give the smallest kernel; the most common pivot pattern among them
        let dim = images.iter().map(|i| i.rows.len()).min().expect("nonempty");
        let mut counts: Vec<(&[usize], usize)> = Vec::new();
        for im in images.iter().filter(|i| i.rows.len() == dim) {
            match counts.iter_mut().find(|(piv, _)| *piv == im.pivots.as_slice()) {
                Some((_, n)) => *n += 1,
                None => counts.push((&im.pivots, 1)),
            }
        }
        let pivots = counts.iter().max_by_key(|(_, n)| *n).expect("nonempty").0.to_vec();
        let mut lift = Lift::new(dim);
        for im in images.iter().filter(|i| i.pivots == pivots) {
            lift.absorb(im);
        }
        let Some(basis) = lift.reconstruct(m.cols()) else { continue };
        if basis.rows() == dim && annihilates(m, &basis) {
            return Some(Subspace::from_spanning(&basis, None));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_small_fractions() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(999_983u64);
        let bound = (&m >> 1u32).sqrt();
        let q = Rational::new(-37, 91);
        let a = {
            let p1 = PrimeField::new(1_000_003).unwrap();
            let p2 = PrimeField::new(999_983).unwrap();
            let r1 = p1.from_rational(&q).unwrap();
            let r2 = p2.from_rational(&q).unwrap();
            let m1 = BigInt::from(1_000_003u64);
            let inv = p2.inv(&(1_000_003 % 999_983));
            crt_step(&BigInt::from(r1), &m1, r2, inv, &p2)
        };
        assert_eq!(rational_reconstruction(&a, &m, &bound), Some(q));
    }

    #[test]
    fn agrees_with_elimination() {
        let rows: Vec<Vec<Rational>> = [[3, -1, 4, 1, 5], [9, 2, -6, 5, 3], [12, 1, -2, 6, 8]]
            .iter()
            .map(|r| r.iter().map(|&x| Rational::new(x, 7)).collect())
            .collect();
        let m = Matrix::from_dense(Rationals, 5, &rows);
        let k = kernel(&m).unwrap();
        assert_eq!(k, m.kernel_by_elimination());
        assert_eq!(k.dim(), 3);
    }
}
