//! Symbolic traces of words in generic `m x m` matrices, i.e. the coordinate
//! functions of the uMPS parametrization, together with checks of its
//! cyclic, reflection and `GL_n` symmetries.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::caps::ResourceCaps;
use crate::combinatorics::{enumerate_bracelets, enumerate_necklaces, Word};
use crate::error::{Error, Result};
use crate::exact_algebra::{DenseMatrix, Rational, SparsePolynomial, Universe, VarId};
use crate::par::{self, Exec};

/// `n` generic `m x m` matrices `A_k = (a^k_ij)` over a polynomial ring in
/// `m^2 n` distinct variables.
#[derive(Clone, Debug)]
pub struct GenericMatrixTuple {
    m: usize,
    n: usize,
    universe: Arc<Universe>,
    matrices: Vec<DenseMatrix<SparsePolynomial>>,
}

impl GenericMatrixTuple {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameters(format!(
                "need m, n >= 1 (got m = {m}, n = {n})"
            )));
        }
        let mut names = Vec::with_capacity(m * m * n);
        for k in 0..n {
            for i in 0..m {
                for j in 0..m {
                    names.push(format!("a{k}_{}{}", i + 1, j + 1));
                }
            }
        }
        let universe = Universe::new(format!("generic({m}x{m})^{n}"), names);
        let matrices = (0..n)
            .map(|k| {
                DenseMatrix::from_fn(m, |i, j| {
                    SparsePolynomial::var(&universe, ((k * m + i) * m + j) as VarId)
                })
            })
            .collect();
        Ok(GenericMatrixTuple {
            m,
            n,
            universe,
            matrices,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    /// Variable id of the entry `(i, j)` of `A_k` (zero-based).
    pub fn var(&self, k: usize, i: usize, j: usize) -> VarId {
        ((k * self.m + i) * self.m + j) as VarId
    }

    pub fn matrices(&self) -> &[DenseMatrix<SparsePolynomial>] {
        &self.matrices
    }

    /// `Tr(A_{i_1} ... A_{i_d})`; the empty word gives the constant `m`.
    pub fn trace_of_word(&self, w: &Word) -> Result<SparsePolynomial> {
        w.check_alphabet(self.n)?;
        if w.is_empty() {
            return Ok(SparsePolynomial::constant(
                &self.universe,
                Rational::from_integer((self.m as i64).into()),
            ));
        }
        Ok(DenseMatrix::word_product(&self.matrices, w.letters()).trace())
    }
}

/// Symbolic trace of a word in `n` generic `m x m` matrices.
pub fn trace_of_word(m: usize, n: usize, w: &Word) -> Result<SparsePolynomial> {
    GenericMatrixTuple::new(m, n)?.trace_of_word(w)
}

/// The coordinates of the uMPS map, one polynomial per orbit representative
/// (bracelets when `m = n = 2`, necklaces otherwise).
#[derive(Clone, Debug)]
pub struct UmpsCoordinateVector {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub coords: BTreeMap<Word, SparsePolynomial>,
}

impl UmpsCoordinateVector {
    /// `{"m":..,"n":..,"d":..,"coords":{"<word>":"<polynomial>",..}}`
    pub fn to_json(&self) -> serde_json::Value {
        let coords: serde_json::Map<String, serde_json::Value> = self
            .coords
            .iter()
            .map(|(w, p)| (w.to_string(), p.to_string().into()))
            .collect();
        serde_json::json!({ "m": self.m, "n": self.n, "d": self.d, "coords": coords })
    }
}

/// True when the ambient space is the dihedral one (`m = n = 2`).
pub fn uses_bracelets(m: usize, n: usize) -> bool {
    m == 2 && n == 2
}

pub fn umps_coordinates(m: usize, n: usize, d: usize, caps: &ResourceCaps, exec: Exec) -> Result<UmpsCoordinateVector> {
    if d == 0 {
        return Err(Error::InvalidParameters("d must be at least 1".into()));
    }
    ResourceCaps::check("m^2*n*d", (m * m * n * d) as u128, caps.max_symbolic_size)?;
    let tuple = GenericMatrixTuple::new(m, n)?;
    let reps: Vec<Word> = if uses_bracelets(m, n) {
        enumerate_bracelets(n, d, None)?
            .into_iter()
            .map(|b| b.into_word())
            .collect()
    } else {
        enumerate_necklaces(n, d, None)?
            .into_iter()
            .map(|b| b.into_word())
            .collect()
    };
    let polys = par::try_map(exec, &reps, |w| tuple.trace_of_word(w))?;
    Ok(UmpsCoordinateVector {
        m,
        n,
        d,
        coords: reps.into_iter().zip(polys).collect(),
    })
}

/// Checks `Tr(w) = Tr(rotation of w)` symbolically for every rotation.
pub fn verify_cyclic_invariance(m: usize, n: usize, w: &Word) -> Result<bool> {
    let tuple = GenericMatrixTuple::new(m, n)?;
    let base = tuple.trace_of_word(w)?;
    for k in 1..w.len() {
        if tuple.trace_of_word(&w.rotate(k))? != base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `Tr(w) = Tr(reverse(w))` symbolically for generic `2 x 2` matrices.
pub fn verify_reflection_invariance_2x2(n: usize, w: &Word) -> Result<bool> {
    verify_reflection_invariance(2, n, w)
}

pub fn verify_reflection_invariance(m: usize, n: usize, w: &Word) -> Result<bool> {
    let tuple = GenericMatrixTuple::new(m, n)?;
    Ok(tuple.trace_of_word(w)? == tuple.trace_of_word(&w.reverse())?)
}

/// The full word-indexed tensor `phi(A)` in `(Q^n)^{⊗d}`, entries in
/// lexicographic word order.
pub fn umps_tensor(a: &[DenseMatrix<Rational>], d: usize) -> Vec<Rational> {
    let n = a.len();
    let total = n.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut letters = vec![0u8; d];
            for slot in letters.iter_mut().rev() {
                *slot = (idx % n) as u8;
                idx /= n;
            }
            DenseMatrix::word_product(a, &letters).trace()
        })
        .collect()
}

/// Applies `g` along every tensor mode.
fn apply_tensor_power(g: &DenseMatrix<Rational>, t: &[Rational], d: usize) -> Vec<Rational> {
    let n = g.dim();
    let mut cur = t.to_vec();
    for mode in 0..d {
        let stride = n.pow((d - 1 - mode) as u32);
        let mut next = vec![Rational::zero(); cur.len()];
        for (idx, slot) in next.iter_mut().enumerate() {
            let i = (idx / stride) % n;
            let base = idx - i * stride;
            for j in 0..n {
                let gij = g.get(i, j);
                if !gij.is_zero() {
                    *slot += gij * &cur[base + j * stride];
                }
            }
        }
        cur = next;
    }
    cur
}

/// Checks `phi(g . A) = g^{⊗d} phi(A)` where `(g . A)_i = sum_j g_ij A_j`.
pub fn verify_gl_equivariance(
    d: usize,
    g: &DenseMatrix<Rational>,
    a: &[DenseMatrix<Rational>],
    caps: &ResourceCaps,
) -> Result<bool> {
    let n = a.len();
    if g.dim() != n {
        return Err(Error::InvalidParameters(format!(
            "g is {0}x{0} but {n} matrices were given",
            g.dim()
        )));
    }
    if g.determinant().is_zero() {
        return Err(Error::SingularMatrix);
    }
    ResourceCaps::check("n^d", (n as u128).saturating_pow(d as u32), caps.max_tensor_entries)?;
    let ga: Vec<DenseMatrix<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a[j].scale(g.get(i, j)))
                .reduce(|x, y| x.add(&y))
                .expect("n >= 1")
        })
        .collect();
    let lhs = umps_tensor(&ga, d);
    let rhs = apply_tensor_power(g, &umps_tensor(a, d), d);
    Ok(lhs == rhs)
}

/// Torus weight check: with `g = diag(t)`, the coordinate at every word `I`
/// scales by `t^{w(I)}`.
pub fn verify_torus_scaling(t: &[Rational], a: &[DenseMatrix<Rational>], d: usize) -> bool {
    let n = a.len();
    let scaled: Vec<DenseMatrix<Rational>> = a.iter().zip(t).map(|(m, ti)| m.scale(ti)).collect();
    let before = umps_tensor(a, d);
    let after = umps_tensor(&scaled, d);
    before.iter().zip(&after).enumerate().all(|(mut idx, (x, y))| {
        let mut factor = Rational::one();
        for _ in 0..d {
            factor *= &t[idx % n];
            idx /= n;
        }
        &(x * &factor) == y
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    fn q(rows: &[&[i64]]) -> DenseMatrix<Rational> {
        DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn single_letter_and_empty_word() {
        let t = GenericMatrixTuple::new(2, 2).unwrap();
        let p = t.trace_of_word(&w("0")).unwrap();
        let expected =
            &SparsePolynomial::var(t.universe(), t.var(0, 0, 0)) + &SparsePolynomial::var(t.universe(), t.var(0, 1, 1));
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "a0_11 + a0_22");
        assert_eq!(t.trace_of_word(&Word::empty()).unwrap().to_string(), "2");
        assert!(t.trace_of_word(&w("2")).is_err());
    }

    #[test]
    fn symbolic_trace_matches_numeric_product() {
        let t = GenericMatrixTuple::new(2, 2).unwrap();
        let a0 = q(&[&[1, 2], &[3, 4]]);
        let a1 = q(&[&[0, 1], &[1, 0]]);
        let mut values = vec![rat(0); 8];
        for (k, m) in [&a0, &a1].iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    values[t.var(k, i, j) as usize] = m.get(i, j).clone();
                }
            }
        }
        let p = t.trace_of_word(&w("01")).unwrap();
        // A0 A1 = [[2, 1], [4, 3]]
        assert_eq!(p.eval_dense(&values).unwrap(), rat(5));
        let direct = DenseMatrix::word_product(&[a0, a1], &[0, 1]).trace();
        assert_eq!(direct, rat(5));
    }

    #[test]
    fn scalar_matrices_give_monomials() {
        let c = umps_coordinates(1, 2, 3, &ResourceCaps::default(), Exec::Sequential).unwrap();
        let strs: Vec<String> = c.coords.values().map(|p| p.to_string()).collect();
        assert_eq!(strs, ["a0_11^3", "a0_11^2*a1_11", "a0_11*a1_11^2", "a1_11^3"]);
    }

    #[test]
    fn coordinates_for_2_2_4() {
        let c = umps_coordinates(2, 2, 4, &ResourceCaps::default(), Exec::Parallel).unwrap();
        assert_eq!(c.coords.len(), 6);
        for p in c.coords.values() {
            assert_eq!(p.homogeneous_degree(&[1; 8]), Some(4));
            assert!(p.terms().all(|(_, c)| c.is_integer() && *c > rat(0)));
        }
        let c3 = umps_coordinates(2, 2, 3, &ResourceCaps::default(), Exec::Sequential).unwrap();
        assert_eq!(c3.coords[&w("001")], trace_of_word(2, 2, &w("001")).unwrap());
        let json = c3.to_json();
        assert_eq!(json["d"], 3);
        assert!(json["coords"]["011"].is_string());
    }

    #[test]
    fn resource_cap_is_reported() {
        let caps = ResourceCaps {
            max_symbolic_size: 10,
            ..ResourceCaps::default()
        };
        assert!(matches!(
            umps_coordinates(2, 2, 4, &caps, Exec::Sequential),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn cyclic_invariance() {
        assert!(verify_cyclic_invariance(2, 2, &w("001")).unwrap());
        assert!(verify_cyclic_invariance(3, 2, &w("0110")).unwrap());
        assert!(verify_cyclic_invariance(2, 2, &w("01")).unwrap());
        assert!(verify_cyclic_invariance(2, 3, &w("01202")).unwrap());
    }

    #[test]
    fn reflection_invariance_for_2x2_pairs() {
        assert!(verify_reflection_invariance_2x2(2, &w("001101")).unwrap());
        assert!(verify_reflection_invariance_2x2(2, &w("01")).unwrap());
        assert!(verify_reflection_invariance_2x2(2, &w("0110100")).unwrap());
    }

    #[test]
    fn reflection_invariance_fails_for_3x3() {
        let x = w("001122");
        assert!(!verify_reflection_invariance(3, 3, &x).unwrap());
        // and already for three 2x2 matrices
        assert!(!verify_reflection_invariance(2, 3, &w("012")).unwrap());
    }

    #[test]
    fn gl_equivariance() {
        let caps = ResourceCaps::default();
        let a = vec![q(&[&[1, 2], &[3, 4]]), q(&[&[0, 1], &[1, -2]])];
        let id = q(&[&[1, 0], &[0, 1]]);
        assert!(verify_gl_equivariance(3, &id, &a, &caps).unwrap());
        let g = q(&[&[2, 1], &[1, 1]]);
        assert!(verify_gl_equivariance(4, &g, &a, &caps).unwrap());
        let singular = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            verify_gl_equivariance(2, &singular, &a, &caps),
            Err(Error::SingularMatrix)
        );
        assert!(verify_torus_scaling(&[rat(2), rat(-3)], &a, 4));
    }
}
