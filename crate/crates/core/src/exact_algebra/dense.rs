use num_traits::{One, Zero};

use super::primes::{add_mod, mul_mod};
use super::{Rational, SparsePolynomial};

/// Minimal ring interface for the small square matrices below. Elements
/// know how to build their own zero and one, so context such as a variable
/// universe or a modulus travels with the values.
pub trait RingElem: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn is_zero_elem(&self) -> bool;
}

impl RingElem for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl RingElem for SparsePolynomial {
    fn zero_like(&self) -> Self {
        SparsePolynomial::zero(self.universe())
    }
    fn one_like(&self) -> Self {
        SparsePolynomial::constant(self.universe(), Rational::one())
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// Element of `Z/p` carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub value: u64,
    pub modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        Fp {
            value: value % modulus,
            modulus,
        }
    }
}

impl RingElem for Fp {
    fn zero_like(&self) -> Self {
        Fp::new(0, self.modulus)
    }
    fn one_like(&self) -> Self {
        Fp::new(1, self.modulus)
    }
    fn add_ref(&self, other: &Self) -> Self {
        Fp {
            value: add_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Fp {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.value == 0
    }
}

/// Small dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: RingElem> DenseMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let dim = rows.len();
        assert!(
            dim > 0 && rows.iter().all(|r| r.len() == dim),
            "matrix must be square and nonempty"
        );
        DenseMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> T) -> Self {
        let mut f = f;
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        DenseMatrix { dim, data }
    }

    pub fn identity(dim: usize, sample: &T) -> Self {
        Self::from_fn(dim, |i, j| if i == j { sample.one_like() } else { sample.zero_like() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        assert_eq!(n, other.dim);
        Self::from_fn(n, |i, j| {
            let mut acc = self.get(i, 0).mul_ref(other.get(0, j));
            for k in 1..n {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if a.is_zero_elem() || b.is_zero_elem() {
                    continue;
                }
                acc = acc.add_ref(&a.mul_ref(b));
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(i, j).add_ref(other.get(i, j)))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(i, j).mul_ref(c))
    }

    pub fn trace(&self) -> T {
        (1..self.dim).fold(self.get(0, 0).clone(), |acc, i| acc.add_ref(self.get(i, i)))
    }

    /// Product of the matrices picked out by `word`; the identity for an empty word.
    pub fn word_product(mats: &[Self], word: &[u8]) -> Self {
        let mut it = word.iter();
        let Some(&first) = it.next() else {
            return Self::identity(mats[0].dim, mats[0].get(0, 0));
        };
        it.fold(mats[first as usize].clone(), |acc, &l| acc.mul(&mats[l as usize]))
    }

    pub fn map<U: RingElem>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl DenseMatrix<Rational> {
    /// Exact determinant by Gaussian elimination.
    pub fn determinant(&self) -> Rational {
        let n = self.dim;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= &a[c][c];
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    fn q(rows: [[i64; 2]; 2]) -> DenseMatrix<Rational> {
        DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn product_and_trace() {
        let a = q([[1, 2], [3, 4]]);
        let b = q([[0, 1], [1, 0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, q([[2, 1], [4, 3]]));
        assert_eq!(ab.trace(), rat(5));
        assert_eq!(DenseMatrix::word_product(&[a.clone(), b], &[]), q([[1, 0], [0, 1]]));
        assert_eq!(a.determinant(), rat(-2));
    }

    #[test]
    fn modular_product_matches_rational() {
        let p = 97;
        let a = q([[1, 2], [3, 4]]);
        let am = a.map(|x| Fp::new(x.to_integer().try_into().unwrap(), p));
        let sq = am.mul(&am);
        assert_eq!(sq.trace().value, 29); // Tr(A^2) = 7 + 22
    }
}
