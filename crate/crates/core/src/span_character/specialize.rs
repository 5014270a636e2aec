use std::sync::Arc;

use super::SpanEngine;
use crate::combinatorics::{binary_bracelets, Word};
use crate::error::Result;
use crate::exact_algebra::{
    matrix_rank, CoefficientMatrix, DenseMatrix, RankMode, Rational, SparsePolynomial, Universe,
};
use crate::par;

/// A pair of `2x2` matrices with entries in `Q[x]` substituted for the two
/// letters, giving lower bounds on weight-space dimensions.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub name: String,
    pub a0: DenseMatrix<SparsePolynomial>,
    pub a1: DenseMatrix<SparsePolynomial>,
}

fn x_universe() -> Arc<Universe> {
    Universe::new("x", vec!["x".into()])
}

impl Specialization {
    /// `A_0 = diag(1, x)` and `A_1` the given integer matrix.
    fn diag_x(name: &str, a1: [[i64; 2]; 2]) -> Self {
        let u = x_universe();
        let c = |v: i64| SparsePolynomial::constant(&u, Rational::from_integer(v.into()));
        let a0 = DenseMatrix::from_rows(vec![vec![c(1), c(0)], vec![c(0), SparsePolynomial::var(&u, 0)]]);
        let a1 = DenseMatrix::from_fn(2, |i, j| c(a1[i][j]));
        Specialization {
            name: name.into(),
            a0,
            a1,
        }
    }

    /// Swap matrix for the ones, detecting weight-2 dimensions.
    pub fn weight_two() -> Self {
        Self::diag_x("weight-two", [[0, 1], [1, 0]])
    }

    /// `[[0,1],[1,1]]` for the ones, used on weight-3 bracelets.
    pub fn weight_three() -> Self {
        Self::diag_x("weight-three", [[0, 1], [1, 1]])
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.a0.get(0, 0).universe()
    }

    pub fn trace(&self, w: &Word) -> SparsePolynomial {
        let mats = [self.a0.clone(), self.a1.clone()];
        DenseMatrix::word_product(&mats, w.letters()).trace()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BraceletSubset {
    #[default]
    All,
    /// Bracelets containing `11` or `101` cyclically.
    TildeB3,
}

impl BraceletSubset {
    pub fn contains(self, w: &Word) -> bool {
        match self {
            BraceletSubset::All => true,
            BraceletSubset::TildeB3 => w.contains_cyclic(&[1, 1]) || w.contains_cyclic(&[1, 0, 1]),
        }
    }
}

/// Weight-3 binary bracelets of length `d` containing `11` or `101`.
pub fn tilde_b3(d: usize) -> Result<Vec<Word>> {
    Ok(binary_bracelets(d, 3)?
        .into_iter()
        .map(|b| b.into_word())
        .filter(|w| BraceletSubset::TildeB3.contains(w))
        .collect())
}

impl SpanEngine {
    /// Specialized coordinates of the weight-`w` bracelets in `subset`.
    pub fn specialized_polys(
        &self,
        d: usize,
        w: usize,
        spec: &Specialization,
        subset: BraceletSubset,
    ) -> Result<Vec<(Word, SparsePolynomial)>> {
        let words: Vec<Word> = binary_bracelets(d, w)?
            .into_iter()
            .map(|b| b.into_word())
            .filter(|b| subset.contains(b))
            .collect();
        let polys = par::map(self.exec, &words, |b| spec.trace(b));
        Ok(words.into_iter().zip(polys).collect())
    }

    /// Rank of the specialized coordinates, a lower bound for the rank of
    /// the same rows before specialization.
    pub fn specialized_rank(
        &self,
        d: usize,
        w: usize,
        spec: &Specialization,
        subset: BraceletSubset,
        mode: RankMode,
    ) -> Result<usize> {
        let polys = self.specialized_polys(d, w, spec, subset)?;
        let nonzero: Vec<_> = polys.iter().filter(|(_, p)| !p.is_zero()).collect();
        if nonzero.is_empty() {
            return Ok(0);
        }
        let cm = CoefficientMatrix::from_polynomials(nonzero.iter().map(|(b, p)| (b.to_string(), p)));
        Ok(matrix_rank(&cm, mode))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::Monomial;

    fn x_poly(u: &Arc<Universe>, terms: &[(u32, i64)]) -> SparsePolynomial {
        let mut p = SparsePolynomial::zero(u);
        for &(e, c) in terms {
            let m = if e == 0 {
                Monomial::one()
            } else {
                Monomial::from_pairs([(0, e)])
            };
            p.add_term(m, Rational::from_integer(c.into()));
        }
        p
    }

    #[test]
    fn weight_two_rank() {
        let e = SpanEngine::default();
        let s = Specialization::weight_two();
        for d in 2..=16 {
            assert_eq!(
                e.specialized_rank(d, 2, &s, BraceletSubset::All, RankMode::Exact)
                    .unwrap(),
                d / 2,
                "d = {d}"
            );
        }
    }

    #[test]
    fn weight_two_closed_form() {
        // the bracelet 1 0^a 1 0^(d-2-a) specializes to x^a + x^(d-2-a)
        let e = SpanEngine::default();
        let s = Specialization::weight_two();
        for d in 2..=10 {
            for (b, p) in e.specialized_polys(d, 2, &s, BraceletSubset::All).unwrap() {
                let pos: Vec<usize> = (0..d).filter(|&i| b.letters()[i] == 1).collect();
                let a = (pos[1] - pos[0] - 1) as u32;
                let expect = x_poly(s.universe(), &[(a, 1), (d as u32 - 2 - a, 1)]);
                assert_eq!(p, expect, "{b}");
            }
        }
    }

    #[test]
    fn weight_three_rank() {
        let e = SpanEngine::default();
        let s = Specialization::weight_three();
        for d in 4..=16 {
            assert_eq!(
                e.specialized_rank(d, 3, &s, BraceletSubset::TildeB3, RankMode::Exact)
                    .unwrap(),
                d - 3,
                "d = {d}"
            );
        }
    }

    #[test]
    fn weight_three_closed_form_for_11() {
        // 1 1 0^b 1 0^(d-3-b) specializes to x^b + x^(d-3-b) + 2 x^(d-3)
        let s = Specialization::weight_three();
        for d in 4..=12 {
            for b in 0..=(d - 3) {
                let mut letters = vec![1, 1];
                letters.extend(std::iter::repeat_n(0, b));
                letters.push(1);
                letters.extend(std::iter::repeat_n(0, d - 3 - b));
                let got = s.trace(&Word::new(letters));
                let expect = x_poly(
                    s.universe(),
                    &[(b as u32, 1), ((d - 3 - b) as u32, 1), (d as u32 - 3, 2)],
                );
                assert_eq!(got, expect, "d = {d}, b = {b}");
            }
        }
    }

    #[test]
    fn tilde_b3_size() {
        for d in 4..=14 {
            let t = tilde_b3(d).unwrap();
            assert!(t.len() >= d - 3, "d = {d}");
            assert!(t.iter().all(|w| w.count(1) == 3));
        }
    }
}
