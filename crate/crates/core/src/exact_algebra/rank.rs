use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::primes::{inv_mod, mul_mod, primes_below_power_of_two, reduce_rational, sub_mod};
use super::{Monomial, Rational, SparsePolynomial, Universe};
use crate::par::{self, Exec};

/// How ranks are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum RankMode {
    /// Fraction-free elimination over the integers.
    Exact,
    /// Rank modulo two large primes below `2^prime_bits`, escalating to a
    /// third prime and then to exact elimination when they disagree.
    Modular { prime_bits: u32 },
}

impl Default for RankMode {
    fn default() -> Self {
        RankMode::Modular { prime_bits: 61 }
    }
}

/// Sparse rational matrix whose columns are monomials: row `i` holds the
/// coefficients of the `i`-th generator polynomial.
#[derive(Clone, Debug)]
pub struct CoefficientMatrix {
    universe: Option<Arc<Universe>>,
    row_labels: Vec<String>,
    columns: Vec<Monomial>,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl CoefficientMatrix {
    /// Columns are the union of occurring monomials in increasing order.
    pub fn from_polynomials<'a>(rows: impl IntoIterator<Item = (String, &'a SparsePolynomial)>) -> Self {
        let rows: Vec<(String, &SparsePolynomial)> = rows.into_iter().collect();
        let universe = rows.first().map(|(_, p)| p.universe().clone());
        let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
        for (_, p) in &rows {
            for (m, _) in p.terms() {
                index.entry(m).or_insert(0);
            }
        }
        for (i, v) in index.values_mut().enumerate() {
            *v = i;
        }
        let columns: Vec<Monomial> = index.keys().map(|&m| m.clone()).collect();
        let data = rows
            .iter()
            .map(|(_, p)| p.terms().map(|(m, c)| (index[m], c.clone())).collect())
            .collect();
        CoefficientMatrix {
            universe,
            row_labels: rows.into_iter().map(|(l, _)| l).collect(),
            columns,
            rows: data,
        }
    }

    /// Dense constructor; column `j` is labelled by the monomial `x_j`.
    pub fn from_dense(rows: Vec<Vec<Rational>>) -> Self {
        let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
        CoefficientMatrix {
            universe: None,
            row_labels: (0..rows.len()).map(|i| i.to_string()).collect(),
            columns: (0..ncols as u32).map(Monomial::var).collect(),
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    fn dense_rational_rows(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|r| {
                let mut v = vec![Rational::zero(); self.ncols()];
                for (j, c) in r {
                    v[*j] = c.clone();
                }
                v
            })
            .collect()
    }

    /// Dense integer rows, each scaled by the lcm of its denominators.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let l = r.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
                let mut v = vec![BigInt::zero(); self.ncols()];
                for (j, c) in r {
                    v[*j] = (c * &l).to_integer();
                }
                v
            })
            .collect()
    }

    fn rows_mod_p(&self, p: u64) -> Option<Vec<Vec<u64>>> {
        self.rows
            .iter()
            .map(|r| {
                let mut v = vec![0u64; self.ncols()];
                for (j, c) in r {
                    v[*j] = reduce_rational(c, p)?;
                }
                Some(v)
            })
            .collect()
    }

    /// Matrix Market coordinate dump of the denominator-cleared integer
    /// matrix, with row and column labels as comments.
    pub fn to_matrix_market(&self) -> String {
        let ints = self.integer_rows();
        let mut s = String::from("%%MatrixMarket matrix coordinate integer general\n");
        for (i, l) in self.row_labels.iter().enumerate() {
            let _ = writeln!(s, "% row {} {}", i + 1, l);
        }
        for (j, m) in self.columns.iter().enumerate() {
            let name = match &self.universe {
                Some(u) => SparsePolynomial::term(u, Rational::one(), m.clone()).to_string(),
                None => format!("{m:?}"),
            };
            let _ = writeln!(s, "% col {} {}", j + 1, name);
        }
        let nnz: usize = ints.iter().map(|r| r.iter().filter(|x| !x.is_zero()).count()).sum();
        let _ = writeln!(s, "{} {} {}", self.nrows(), self.ncols(), nnz);
        for (i, r) in ints.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    let _ = writeln!(s, "{} {} {}", i + 1, j + 1, x);
                }
            }
        }
        s
    }

    /// Basis of `{c : sum_i c_i row_i = 0}`, each vector scaled to be
    /// integral with positive last nonzero entry.
    pub fn left_kernel(&self) -> Vec<Vec<Rational>> {
        // null space of the transpose via reduced row echelon form
        let dense = self.dense_rational_rows();
        let (nr, nc) = (self.nrows(), self.ncols());
        let mut t: Vec<Vec<Rational>> = (0..nc)
            .map(|j| (0..nr).map(|i| dense[i][j].clone()).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..nr {
            let Some(p) = (r..nc).find(|&i| !t[i][c].is_zero()) else {
                continue;
            };
            t.swap(r, p);
            let inv = t[r][c].recip();
            for x in t[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..nc {
                if i != r && !t[i][c].is_zero() {
                    let f = t[i][c].clone();
                    for k in 0..nr {
                        let sub = &f * &t[r][k];
                        t[i][k] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == nc {
                break;
            }
        }
        let free: Vec<usize> = (0..nr).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); nr];
                v[f] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -t[row][f].clone();
                }
                normalize_integral(v)
            })
            .collect()
    }
}

fn normalize_integral(v: Vec<Rational>) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = match ints.iter().rev().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    let g = if g.is_zero() { BigInt::one() } else { g };
    ints.into_iter()
        .map(|x| Rational::from_integer(x * &sign / &g))
        .collect()
}

/// Rank modulo `p`, or `None` when `p` divides a denominator.
pub fn rank_mod_p(m: &CoefficientMatrix, p: u64) -> Option<usize> {
    let rows = m.rows_mod_p(p)?;
    // basis rows kept with pivot entry 1 and zeros in earlier pivot columns
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for mut row in rows {
        for (pc, b) in &basis {
            let f = row[*pc];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(b) {
                    if y != 0 {
                        *x = sub_mod(*x, mul_mod(f, y, p), p);
                    }
                }
            }
        }
        if let Some(pc) = row.iter().position(|&x| x != 0) {
            let inv = inv_mod(row[pc], p);
            for x in row.iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            basis.push((pc, row));
            if basis.len() == m.ncols() {
                break;
            }
        }
    }
    Some(basis.len())
}

/// Exact rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rank_exact(m: &CoefficientMatrix) -> usize {
    rank_exact_with(m, Exec::default())
}

pub fn rank_exact_with(m: &CoefficientMatrix, exec: Exec) -> usize {
    let mut a = m.integer_rows();
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = &pivot_row[c];
        let prev_ref = &prev;
        par::for_each_mut(exec, rest, |row| {
            let f = std::mem::take(&mut row[c]);
            for k in c + 1..nc {
                let num = piv * &row[k] - &f * &pivot_row[k];
                debug_assert!((&num % prev_ref).is_zero(), "Bareiss division must be exact");
                row[k] = num / prev_ref;
            }
        });
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Outcome of a rank computation, including which primes were consulted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub mode: RankMode,
    /// `(prime, rank mod prime)` for every prime used.
    pub modular: Vec<(u64, usize)>,
    pub escalated_to_exact: bool,
}

pub fn rank_with_report(m: &CoefficientMatrix, mode: RankMode) -> RankReport {
    match mode {
        RankMode::Exact => RankReport {
            rank: rank_exact(m),
            mode,
            modular: vec![],
            escalated_to_exact: false,
        },
        RankMode::Modular { prime_bits } => {
            let mut used = Vec::new();
            // primes dividing a denominator are skipped (re-drawn)
            for p in primes_below_power_of_two(prime_bits, 16) {
                if let Some(r) = rank_mod_p(m, p) {
                    used.push((p, r));
                }
                let ranks: Vec<usize> = used.iter().map(|x| x.1).collect();
                match ranks.as_slice() {
                    [a, b] if a == b => {
                        return RankReport {
                            rank: *a,
                            mode,
                            modular: used,
                            escalated_to_exact: false,
                        }
                    }
                    [a, b, c] if *c == (*a).max(*b) => {
                        return RankReport {
                            rank: *c,
                            mode,
                            modular: used,
                            escalated_to_exact: false,
                        }
                    }
                    [_, _, _] => break,
                    _ => {}
                }
            }
            RankReport {
                rank: rank_exact(m),
                mode,
                modular: used,
                escalated_to_exact: true,
            }
        }
    }
}

pub fn matrix_rank(m: &CoefficientMatrix, mode: RankMode) -> usize {
    rank_with_report(m, mode).rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{rat, ratio};
    use proptest::prelude::*;

    fn dense(rows: &[Vec<i64>]) -> CoefficientMatrix {
        CoefficientMatrix::from_dense(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn identity_and_zero() {
        let id: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| i64::from(i == j)).collect()).collect();
        let m = dense(&id);
        assert_eq!(matrix_rank(&m, RankMode::Exact), 5);
        assert_eq!(matrix_rank(&m, RankMode::default()), 5);
        let z = dense(&[vec![0, 0, 0], vec![0, 0, 0]]);
        assert_eq!(matrix_rank(&z, RankMode::Exact), 0);
        assert_eq!(matrix_rank(&z, RankMode::default()), 0);
    }

    #[test]
    fn small_prime_can_undercount_and_escalation_recovers() {
        // det = 6, so the rank drops mod 2 and mod 3
        let m = dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(rank_mod_p(&m, 2), Some(1));
        assert_eq!(rank_mod_p(&m, 3), Some(1));
        assert_eq!(rank_exact(&m), 2);
        let r = rank_with_report(&m, RankMode::Modular { prime_bits: 3 });
        // primes 7, 5, 3: 7 and 5 agree on 2
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn denominators_and_kernel() {
        let m = CoefficientMatrix::from_dense(vec![
            vec![ratio(1, 2), rat(1)],
            vec![rat(1), rat(2)],
            vec![rat(0), rat(1)],
        ]);
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rank_mod_p(&m, 2), None);
        let k = m.left_kernel();
        assert_eq!(k, vec![vec![rat(-2), rat(1), rat(0)]]);
        let mm = m.to_matrix_market();
        assert!(mm.starts_with("%%MatrixMarket matrix coordinate integer general"));
        assert!(mm.contains("\n3 2 5\n"));
    }

    proptest! {
        #[test]
        fn modular_agrees_with_exact(
            rows in 1usize..8, cols in 1usize..8,
            entries in proptest::collection::vec(-9i64..=9, 64),
            rank_cap in 0usize..8,
        ) {
            // low-rank matrices via products make the test meaningful
            let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| entries[(i * 8 + j) % 64]).collect()).collect();
            let mut b = a.clone();
            for r in b.iter_mut().skip(rank_cap.max(1)) {
                for (x, y) in r.iter_mut().zip(&a[0]) {
                    *x = 2 * *y;
                }
            }
            for m in [dense(&a), dense(&b)] {
                let exact = rank_exact(&m);
                let [p1, p2] = primes_below_power_of_two(61, 2)[..] else { unreachable!() };
                prop_assert_eq!(rank_mod_p(&m, p1), Some(exact));
                prop_assert_eq!(rank_mod_p(&m, p2), Some(exact));
                prop_assert_eq!(matrix_rank(&m, RankMode::default()), exact);
                prop_assert_eq!(m.left_kernel().len(), m.nrows() - exact);
            }
        }

        #[test]
        fn rank_invariant_under_row_permutation_and_scaling(
            entries in proptest::collection::vec(-9i64..=9, 30),
            scale in 1i64..7,
            shift in 0usize..5,
        ) {
            let a: Vec<Vec<i64>> = entries.chunks(6).map(|c| c.to_vec()).collect();
            let mut b = a.clone();
            b.rotate_left(shift);
            let m1 = dense(&a);
            let m2 = CoefficientMatrix::from_dense(
                b.iter().map(|r| r.iter().map(|&x| ratio(x * scale, 3)).collect()).collect(),
            );
            prop_assert_eq!(rank_exact(&m1), rank_exact(&m2));
            prop_assert_eq!(matrix_rank(&m1, RankMode::default()), matrix_rank(&m2, RankMode::default()));
        }
    }
}
