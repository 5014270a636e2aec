use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{example_relation, generate_ch_relation, substitute_relation, Ambient, LinearRelation};
use crate::combinatorics::{canonical_bracelet, Word};
use crate::error::{Error, Result};
use crate::exact_algebra::Rational;
use crate::span_character::BraceletSubset;

fn word(parts: &[(u8, usize)]) -> Word {
    let mut v = Vec::new();
    for &(l, k) in parts {
        v.extend(std::iter::repeat_n(l, k));
    }
    Word::new(v)
}

/// The `m = 2` relation with `B^2` appended and `A_0 = 1`, `A_1 = 11`,
/// `A_2 = 01`, `B = 0`: a relation on binary words of length 8.
pub fn example_d8_relation() -> Result<LinearRelation> {
    let map = [
        word(&[(1, 1)]),
        word(&[(1, 2)]),
        word(&[(0, 1), (1, 1)]),
        word(&[(0, 1)]),
    ];
    substitute_relation(&generate_ch_relation(2, 2)?, &map, 2)
}

/// `A_0 = 0`, `B = 1`, `A_i = 2` for `i >= 1`: a relation on ternary words
/// of length `m (m - 1) / 2 + ell + m + 1`.
pub fn corollary_relation(m: usize, ell: usize) -> Result<LinearRelation> {
    let mut map = vec![word(&[(0, 1)])];
    map.extend((1..=m).map(|_| word(&[(2, 1)])));
    map.push(word(&[(1, 1)]));
    substitute_relation(&generate_ch_relation(m, ell)?, &map, 3)
}

/// `ell = m`, `A_0 = 0 1^(m+1) 0`, `B = 1`, `A_i = 0`: a relation on binary
/// words of length `(m + 3)(m + 2) / 2`.
pub fn remark_relation(m: usize) -> Result<LinearRelation> {
    let mut map = vec![word(&[(0, 1), (1, m + 1), (0, 1)])];
    map.extend((1..=m).map(|_| word(&[(0, 1)])));
    map.push(word(&[(1, 1)]));
    substitute_relation(&generate_ch_relation(m, m)?, &map, 2)
}

/// The trailing-power example with `A1 = 1 0^(a-1)`, `A2 = 1 0^b`, `A3 = 1`,
/// `A0 = 0` and `k = c`, merged up to dihedral symmetry. It expresses
/// `T_{1 0^a 1 0^b 1 0^c}` through `T_{1 0^(a-1) 1 0^(b+1) 1 0^c}` and
/// bracelets containing `11` or `101`.
pub fn w3_relation(a: usize, b: usize, c: usize) -> Result<LinearRelation> {
    if a == 0 {
        return Err(Error::InvalidParameters("need a >= 1".into()));
    }
    let map = [
        word(&[(0, 1)]),
        word(&[(1, 1), (0, a - 1)]),
        word(&[(1, 1), (0, b)]),
        word(&[(1, 1)]),
    ];
    Ok(substitute_relation(&example_relation().with_power(c), &map, 2)?.merged(Ambient::Dihedral))
}

/// Gaps `a <= b <= c` between the ones of a weight-3 binary word when all are
/// at least 2, i.e. the word avoids `11` and `101` cyclically.
pub fn w3_target(w: &Word) -> Option<(usize, usize, usize)> {
    if w.count(1) != 3 || w.letters().iter().any(|&l| l > 1) {
        return None;
    }
    let d = w.len();
    let ones: Vec<usize> = (0..d).filter(|&i| w.letters()[i] == 1).collect();
    let mut gaps = [ones[1] - ones[0] - 1, ones[2] - ones[1] - 1, d - ones[2] + ones[0] - 1];
    gaps.sort_unstable();
    (gaps[0] >= 2).then_some((gaps[0], gaps[1], gaps[2]))
}

/// `T_target` written in the bracelets containing `11` or `101`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct W3Reduction {
    pub target: Word,
    #[serde(with = "crate::exact_algebra::rational_serde::vec")]
    pub coeffs: Vec<Rational>,
    pub words: Vec<Word>,
    /// Number of rewriting steps used.
    pub steps: usize,
}

/// Repeatedly applies [`w3_relation`] to the term with gaps outside the
/// target set until every term contains `11` or `101`. The smallest gap
/// drops by one at each step.
pub fn w3_reduce(target: &Word) -> Result<W3Reduction> {
    let target = canonical_bracelet(target);
    if target.count(1) != 3 {
        return Err(Error::InvalidParameters(format!("{target} does not have weight 3")));
    }
    let d = target.len();
    let mut expr: BTreeMap<Word, Rational> = BTreeMap::new();
    expr.insert(target.clone(), Rational::from_integer(1.into()));
    let mut steps = 0;
    loop {
        let pending = expr.iter().find_map(|(w, _)| w3_target(w).map(|g| (w.clone(), g)));
        let Some((w, (a, b, c))) = pending else { break };
        steps += 1;
        if steps > d * d {
            return Err(Error::InvalidParameters(format!(
                "rewriting of {target} did not terminate"
            )));
        }
        let rel = w3_relation(a, b, c)?;
        let t = rel
            .terms()
            .find(|(_, u)| **u == w)
            .map(|(c, _)| c.clone())
            .unwrap_or_else(Rational::zero);
        if t.is_zero() {
            return Err(Error::InvalidParameters(format!(
                "relation for {w} lost its leading term"
            )));
        }
        let scale = -expr[&w].clone() / t;
        for (c, u) in rel.terms() {
            *expr.entry(u.clone()).or_insert_with(Rational::zero) += c * &scale;
        }
        expr.retain(|_, c| !c.is_zero());
    }
    debug_assert!(expr.keys().all(|w| BraceletSubset::TildeB3.contains(w)));
    let (words, coeffs) = expr.into_iter().unzip();
    Ok(W3Reduction {
        target,
        coeffs,
        words,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binary_bracelets;
    use crate::exact_algebra::rat;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn d8_relation_terms() {
        let r = example_d8_relation().unwrap().merged(Ambient::Dihedral).normalized();
        assert_eq!(r.word_length().unwrap(), 8);
        assert_eq!(r.len(), 6);
        // left side of the display minus the right side
        let lhs = ["11100100", "11010100", "11000110"];
        let rhs = ["11010010", "11001100", "11100010"];
        let mut expect: BTreeMap<Word, Rational> = BTreeMap::new();
        for s in lhs {
            expect.insert(canonical_bracelet(&w(s)), rat(1));
        }
        for s in rhs {
            expect.insert(canonical_bracelet(&w(s)), rat(-1));
        }
        let got: BTreeMap<Word, Rational> = r.words.iter().cloned().zip(r.coeffs.iter().cloned()).collect();
        let neg: BTreeMap<Word, Rational> = expect.iter().map(|(k, v)| (k.clone(), -v.clone())).collect();
        assert!(got == expect || got == neg, "{got:?}");
    }

    #[test]
    fn corollary_term_count() {
        let r = corollary_relation(2, 2).unwrap();
        assert_eq!(r.word_length().unwrap(), 6);
        assert_eq!(r.len(), 6);
        assert_eq!(corollary_relation(2, 6).unwrap().word_length().unwrap(), 10);
        assert_eq!(corollary_relation(3, 3).unwrap().len(), 24);
    }

    #[test]
    fn remark_length() {
        assert_eq!(remark_relation(2).unwrap().word_length().unwrap(), 10);
        assert_eq!(remark_relation(3).unwrap().word_length().unwrap(), 15);
    }

    #[test]
    fn w3_relation_matches_display() {
        // T_{10^a 10^b 10^c} - T_{10^(a-1) 10^(b+1) 10^c} - T_{10^b 1 0 1 0^(a+c-1)}
        //   - T_{1 1 0^a 1 0^(b+c)} + T_{1 0^(b+1) 1 1 0^(a+c-1)} + T_{1 0 1 0^(a-1) 1 0^(b+c)} = 0
        let (a, b, c) = (3, 3, 4);
        let p = |parts: &[(u8, usize)]| canonical_bracelet(&word(parts));
        let mut expect: BTreeMap<Word, Rational> = BTreeMap::new();
        for (sign, parts) in [
            (1, vec![(1, 1), (0, a), (1, 1), (0, b), (1, 1), (0, c)]),
            (-1, vec![(1, 1), (0, a - 1), (1, 1), (0, b + 1), (1, 1), (0, c)]),
            (-1, vec![(1, 1), (0, b), (1, 1), (0, 1), (1, 1), (0, a + c - 1)]),
            (-1, vec![(1, 2), (0, a), (1, 1), (0, b + c)]),
            (1, vec![(1, 1), (0, b + 1), (1, 2), (0, a + c - 1)]),
            (1, vec![(1, 1), (0, 1), (1, 1), (0, a - 1), (1, 1), (0, b + c)]),
        ] {
            *expect.entry(p(&parts)).or_insert_with(Rational::zero) += rat(sign);
        }
        let r = w3_relation(a, b, c).unwrap();
        let got: BTreeMap<Word, Rational> = r.words.iter().cloned().zip(r.coeffs.iter().cloned()).collect();
        let neg: BTreeMap<Word, Rational> = expect.iter().map(|(k, v)| (k.clone(), -v.clone())).collect();
        assert!(got == expect || got == neg, "{got:?}");
    }

    #[test]
    fn w3_targets() {
        assert_eq!(w3_target(&w("100100100")), Some((2, 2, 2)));
        assert_eq!(w3_target(&w("110010000")), None);
        assert_eq!(w3_target(&w("101000000")), None);
        assert_eq!(w3_target(&w("1000100100")), Some((2, 2, 3)));
    }

    #[test]
    fn w3_closure_lands_in_subset() {
        for d in 9..=14 {
            for b in binary_bracelets(d, 3).unwrap() {
                let b = b.into_word();
                if w3_target(&b).is_none() {
                    continue;
                }
                let red = w3_reduce(&b).unwrap();
                assert!(red.steps >= 1);
                assert!(red.words.iter().all(|u| BraceletSubset::TildeB3.contains(u)), "{b}");
            }
        }
    }
}
