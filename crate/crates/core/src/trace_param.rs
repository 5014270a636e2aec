//! Trace parametrization of `uMPS(2, 2, d)`.
//!
//! Every trace of a binary word in two `2 x 2` matrices is a unique
//! polynomial `P_b` in
//! `T0 = Tr A0, T1 = Tr A1, T00 = Tr A0^2, T01 = Tr A0A1, T11 = Tr A1^2`.
//! Words of length at most three use explicit cubics; longer words are
//! reduced with the four-matrix trace identity
//!
//! ```text
//! 2Tr(ABCD) = Tr(A)(Tr(BCD) - Tr(B)Tr(CD)) + Tr(B)(Tr(CDA) - Tr(C)Tr(DA))
//!           + Tr(C)(Tr(DAB) - Tr(D)Tr(AB)) + Tr(D)(Tr(ABC) - Tr(A)Tr(BC))
//!           - Tr(AC)Tr(BD) + Tr(AB)Tr(CD) + Tr(AD)Tr(BC) + Tr(A)Tr(B)Tr(C)Tr(D)
//! ```
//!
//! with `A, B, C` the first three letters and `D` the remaining suffix, so
//! every trace on the right is of a strictly shorter word.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::caps::ResourceCaps;
use crate::combinatorics::{binary_bracelets, canonical_bracelet, enumerate_bracelets, Bracelet, Word};
use crate::error::{Error, Result};
use crate::exact_algebra::{rat, ratio, DenseMatrix, Monomial, Rational, SparsePolynomial, Universe, VarId};
use crate::par::{self, Exec};

pub const T0: VarId = 0;
pub const T1: VarId = 1;
pub const T00: VarId = 2;
pub const T01: VarId = 3;
pub const T11: VarId = 4;

/// Degrees of `T0, T1, T00, T01, T11`.
pub const GRADING: [u32; 5] = [1, 1, 2, 2, 2];

/// Occurrences of the letter 1 contributed by each variable.
pub const ONES: [u32; 5] = [0, 1, 0, 1, 2];

/// Element of `Q[T0, T1, T00, T01, T11]`.
pub type TracePoly5 = SparsePolynomial;

pub fn trace_universe() -> &'static Arc<Universe> {
    static U: OnceLock<Arc<Universe>> = OnceLock::new();
    U.get_or_init(|| Universe::new("trace5", ["T0", "T1", "T00", "T01", "T11"].map(String::from).to_vec()))
}

fn t(v: VarId) -> TracePoly5 {
    SparsePolynomial::var(trace_universe(), v)
}

fn mono(c: Rational, pairs: &[(VarId, u32)]) -> TracePoly5 {
    SparsePolynomial::term(trace_universe(), c, Monomial::from_pairs(pairs.iter().copied()))
}

/// `P_b` for words of length at most three.
pub fn base_case(b: &Word) -> Result<TracePoly5> {
    b.check_alphabet(2)?;
    if b.len() > 3 {
        return Err(Error::NoBaseCase(b.len()));
    }
    let key = canonical_bracelet(b).to_string();
    let p = match key.as_str() {
        "" => SparsePolynomial::constant(trace_universe(), rat(2)),
        "0" => t(T0),
        "1" => t(T1),
        "00" => t(T00),
        "01" => t(T01),
        "11" => t(T11),
        "000" => &mono(ratio(-1, 2), &[(T0, 3)]) + &mono(ratio(3, 2), &[(T0, 1), (T00, 1)]),
        "001" => {
            let p = &mono(ratio(-1, 2), &[(T0, 2), (T1, 1)]) + &mono(ratio(1, 2), &[(T1, 1), (T00, 1)]);
            &p + &mono(rat(1), &[(T0, 1), (T01, 1)])
        }
        "011" => {
            let p = &mono(ratio(-1, 2), &[(T0, 1), (T1, 2)]) + &mono(ratio(1, 2), &[(T0, 1), (T11, 1)]);
            &p + &mono(rat(1), &[(T1, 1), (T01, 1)])
        }
        "111" => &mono(ratio(-1, 2), &[(T1, 3)]) + &mono(ratio(3, 2), &[(T1, 1), (T11, 1)]),
        _ => unreachable!("canonical binary word of length <= 3"),
    };
    Ok(p)
}

/// Memoized trace parametrization, keyed by canonical bracelet.
///
/// Concurrent callers share the cache; values are deterministic, so two
/// threads racing to insert the same key insert identical polynomials.
#[derive(Debug, Default)]
pub struct TraceParam {
    cache: RwLock<HashMap<Word, Arc<TracePoly5>>>,
}

impl TraceParam {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cached(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    /// `P_b` for any binary word.
    pub fn reduce_word(&self, b: &Word) -> Result<Arc<TracePoly5>> {
        b.check_alphabet(2)?;
        let key = canonical_bracelet(b);
        if let Some(p) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(p.clone());
        }
        let p = Arc::new(if key.len() <= 3 {
            base_case(&key)?
        } else {
            self.reduce_abcd(key.letters())?
        });
        self.cache
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| p.clone());
        Ok(p)
    }

    fn tr(&self, parts: &[&[u8]]) -> Result<Arc<TracePoly5>> {
        let w: Vec<u8> = parts.concat();
        self.reduce_word(&Word::new(w))
    }

    fn reduce_abcd(&self, w: &[u8]) -> Result<TracePoly5> {
        let (a, b, c, d) = (&w[0..1], &w[1..2], &w[2..3], &w[3..]);
        let tr_a = self.tr(&[a])?;
        let tr_b = self.tr(&[b])?;
        let tr_c = self.tr(&[c])?;
        let tr_d = self.tr(&[d])?;
        let tr_ab = self.tr(&[a, b])?;
        let tr_bc = self.tr(&[b, c])?;
        let tr_ac = self.tr(&[a, c])?;
        let tr_cd = self.tr(&[c, d])?;
        let tr_da = self.tr(&[d, a])?;
        let tr_bd = self.tr(&[b, d])?;

        let mut s = &*tr_a * &(&*self.tr(&[b, c, d])? - &(&*tr_b * &tr_cd));
        s = &s + &(&*tr_b * &(&*self.tr(&[c, d, a])? - &(&*tr_c * &tr_da)));
        s = &s + &(&*tr_c * &(&*self.tr(&[d, a, b])? - &(&*tr_d * &tr_ab)));
        s = &s + &(&*tr_d * &(&*self.tr(&[a, b, c])? - &(&*tr_a * &tr_bc)));
        s = &s - &(&*tr_ac * &tr_bd);
        s = &s + &(&*tr_ab * &tr_cd);
        s = &s + &(&*tr_da * &tr_bc);
        s = &s + &(&(&*tr_a * &tr_b) * &(&*tr_c * &tr_d));
        Ok(s.scale(&ratio(1, 2)))
    }

    /// Fills the cache with every bracelet of length `1..=d`, one length at
    /// a time; bracelets of one length are independent given the shorter ones.
    pub fn fill_to(&self, d: usize, caps: &ResourceCaps, exec: Exec) -> Result<()> {
        ResourceCaps::check(
            "trace parametrization length",
            d as u128,
            caps.max_trace_param_length as u128,
        )?;
        for len in 1..=d {
            let bs = enumerate_bracelets(2, len, None)?;
            par::try_map(exec, &bs, |b| self.reduce_word(b.representative()))?;
        }
        Ok(())
    }

    /// `P_b` for every bracelet of length `d`, in bracelet order.
    pub fn trace_param_vector(
        &self,
        d: usize,
        caps: &ResourceCaps,
        exec: Exec,
    ) -> Result<Vec<(Bracelet, Arc<TracePoly5>)>> {
        if d == 0 {
            return Err(Error::InvalidParameters("d must be at least 1".into()));
        }
        self.fill_to(d.saturating_sub(1), caps, exec)?;
        let bs = enumerate_bracelets(2, d, None)?;
        let ps = par::try_map(exec, &bs, |b| self.reduce_word(b.representative()))?;
        Ok(bs.into_iter().zip(ps).collect())
    }

    /// `P_b` for the bracelets of length `d` with `ones` letters equal to 1.
    pub fn weight_slice(
        &self,
        d: usize,
        ones: usize,
        caps: &ResourceCaps,
        exec: Exec,
    ) -> Result<Vec<(Bracelet, Arc<TracePoly5>)>> {
        self.fill_to(d.saturating_sub(1), caps, exec)?;
        let bs = binary_bracelets(d, ones)?;
        let ps = par::try_map(exec, &bs, |b| self.reduce_word(b.representative()))?;
        Ok(bs.into_iter().zip(ps).collect())
    }
}

/// Values of `(T0, T1, T00, T01, T11)` at a concrete pair of matrices.
pub fn generator_values(a0: &DenseMatrix<Rational>, a1: &DenseMatrix<Rational>) -> [Rational; 5] {
    [
        a0.trace(),
        a1.trace(),
        a0.mul(a0).trace(),
        a0.mul(a1).trace(),
        a1.mul(a1).trace(),
    ]
}

/// Degree of `p` under [`GRADING`] and its number of 1-letters, if bihomogeneous.
pub fn bidegree(p: &TracePoly5) -> Option<(u32, u32)> {
    Some((p.homogeneous_degree(&GRADING)?, p.homogeneous_degree(&ONES)?))
}

/// Swaps the roles of `A0` and `A1`.
pub fn swap_letters(p: &TracePoly5) -> TracePoly5 {
    p.rename(trace_universe(), |v| match v {
        T0 => T1,
        T1 => T0,
        T00 => T11,
        T11 => T00,
        other => other,
    })
}

/// Number of monomials of graded degree `d` in the five generators.
pub fn count_graded_monomials(d: usize) -> u128 {
    let mut count = 0;
    // T00^a T01^b T11^c of degree 2k times a binary monomial of degree d - 2k
    for k in 0..=d / 2 {
        let quad = ((k + 1) * (k + 2) / 2) as u128;
        count += quad * (d - 2 * k + 1) as u128;
    }
    count
}

/// Generator values at `A0 = Id, A1 = 0`.
pub fn identity_values() -> [Rational; 5] {
    [rat(2), rat(0), rat(2), rat(0), rat(0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn q(rows: [[i64; 2]; 2]) -> DenseMatrix<Rational> {
        DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    fn random_pair(rng: &mut ChaCha8Rng) -> (DenseMatrix<Rational>, DenseMatrix<Rational>) {
        let mut m = || DenseMatrix::from_fn(2, |_, _| rat(rng.gen_range(-6..=6)));
        (m(), m())
    }

    #[test]
    fn cubic_base_cases() {
        assert_eq!(base_case(&w("111")).unwrap().to_string(), "-1/2*T1^3 + 3/2*T1*T11");
        assert_eq!(base_case(&w("0")).unwrap().to_string(), "T0");
        assert_eq!(
            base_case(&w("100")).unwrap().to_string(),
            "-1/2*T0^2*T1 + T0*T01 + 1/2*T1*T00"
        );
        assert_eq!(base_case(&w("")).unwrap().to_string(), "2");
        assert!(matches!(base_case(&w("0101")), Err(Error::NoBaseCase(4))));
    }

    #[test]
    fn cubic_at_identity() {
        let p = base_case(&w("000")).unwrap();
        assert_eq!(p.eval_dense(&identity_values()).unwrap(), rat(2));
    }

    #[test]
    fn abab_matches_matrix_product() {
        let tp = TraceParam::new();
        let p = tp.reduce_word(&w("0101")).unwrap();
        let a0 = q([[1, 2], [3, 4]]);
        let a1 = q([[0, 1], [1, 0]]);
        let direct = DenseMatrix::word_product(&[a0.clone(), a1.clone()], &[0, 1, 0, 1]).trace();
        assert_eq!(p.eval_dense(&generator_values(&a0, &a1)).unwrap(), direct);
        let p4 = tp.reduce_word(&w("0000")).unwrap();
        assert_eq!(p4.eval_dense(&identity_values()).unwrap(), rat(2));
    }

    #[test]
    fn length_three_vector_is_the_four_cubics() {
        let tp = TraceParam::new();
        let v = tp
            .trace_param_vector(3, &ResourceCaps::default(), Exec::Sequential)
            .unwrap();
        let keys: Vec<String> = v.iter().map(|(b, _)| b.to_string()).collect();
        assert_eq!(keys, ["000", "001", "011", "111"]);
        for (b, p) in &v {
            assert_eq!(**p, base_case(b.representative()).unwrap());
        }
        assert_eq!(
            tp.trace_param_vector(8, &ResourceCaps::default(), Exec::Parallel)
                .unwrap()
                .len(),
            30
        );
    }

    #[test]
    fn oracle_equivalence_up_to_length_7() {
        let tp = TraceParam::new();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pairs: Vec<_> = (0..5).map(|_| random_pair(&mut rng)).collect();
        for d in 1..=7 {
            for (b, p) in tp
                .trace_param_vector(d, &ResourceCaps::default(), Exec::Parallel)
                .unwrap()
            {
                assert_eq!(bidegree(&p), Some((d as u32, b.ones() as u32)), "{b}");
                for (a0, a1) in &pairs {
                    let direct =
                        DenseMatrix::word_product(&[a0.clone(), a1.clone()], b.representative().letters()).trace();
                    assert_eq!(p.eval_dense(&generator_values(a0, a1)).unwrap(), direct, "P_{b}");
                }
            }
        }
    }

    #[test]
    fn well_defined_on_orbits() {
        let tp = TraceParam::new();
        let x = w("0010110");
        let p = tp.reduce_word(&x).unwrap();
        // compute a rotated and reflected version through a fresh cache
        for k in 0..7 {
            let fresh = TraceParam::new();
            assert_eq!(*fresh.reduce_word(&x.rotate(k).reverse()).unwrap(), *p);
        }
    }

    #[test]
    fn swap_symmetry() {
        let tp = TraceParam::new();
        let b = w("0010111");
        let swapped = b.relabel(&[1, 0]);
        assert_eq!(
            swap_letters(&tp.reduce_word(&b).unwrap()),
            *tp.reduce_word(&swapped).unwrap()
        );
    }

    #[test]
    fn graded_monomial_count_by_brute_force() {
        for d in 0..=12usize {
            let mut brute = 0u128;
            for e in 0..(d + 1).pow(5) {
                let mut x = e;
                let exps: Vec<usize> = (0..5)
                    .map(|_| {
                        let v = x % (d + 1);
                        x /= d + 1;
                        v
                    })
                    .collect();
                if exps[0] + exps[1] + 2 * (exps[2] + exps[3] + exps[4]) == d {
                    brute += 1;
                }
            }
            assert_eq!(count_graded_monomials(d), brute, "d = {d}");
        }
    }
}
