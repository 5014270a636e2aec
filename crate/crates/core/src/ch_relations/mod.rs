//! Linear trace relations coming from the Cayley–Hamilton theorem: the
//! signed `S_m x C_{m+1}` sum, substitutions of words for its letters, and
//! certificates that the resulting relations vanish and are nontrivial.

mod presets;
mod verify;

pub use presets::{
    corollary_relation, example_d8_relation, remark_relation, w3_reduce, w3_relation, w3_target, W3Reduction,
};
pub use verify::{
    binary_kernel_check, certify_nontrivial, ch_extend, verify_relation_modular, verify_relation_symbolic, Assignment,
    KernelCheck, Nontriviality, RelationCertificate, VerificationMode,
};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{canonical_bracelet, canonical_necklace, Word};
use crate::error::{Error, Result};
use crate::exact_algebra::{rat, Rational};

/// Symmetry used to identify trace coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Cyclic,
    Dihedral,
}

impl Ambient {
    pub fn canonical(self, w: &Word) -> Word {
        match self {
            Ambient::Cyclic => canonical_necklace(w),
            Ambient::Dihedral => canonical_bracelet(w),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Ambient::Cyclic => "cyclic",
            Ambient::Dihedral => "dihedral",
        }
    }
}

/// `sum_j c_j Tr(word_j) = 0` over named abstract letters.
///
/// When `trailing` is set, the relation is read as the family
/// `sum_j c_j Tr(word_j X^k) = 0` for the marked letter `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRelation {
    pub letters: Vec<String>,
    pub terms: Vec<(Rational, Word)>,
    pub trailing: Option<u8>,
}

impl TraceRelation {
    pub fn new(letters: Vec<String>, terms: Vec<(Rational, Word)>, trailing: Option<u8>) -> Result<Self> {
        let n = letters.len();
        for (c, w) in &terms {
            if c.is_zero() {
                return Err(Error::InvalidParameters("zero coefficient in relation".into()));
            }
            if w.is_empty() {
                return Err(Error::InvalidParameters("empty word in relation".into()));
            }
            w.check_alphabet(n)?;
        }
        if let Some(t) = trailing {
            if t as usize >= n {
                return Err(Error::LetterOutOfRange { letter: t, n });
            }
        }
        Ok(TraceRelation {
            letters,
            terms,
            trailing,
        })
    }

    pub fn alphabet(&self) -> usize {
        self.letters.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Appends `X^k` for the trailing letter `X`; the result has no trailing
    /// marker. Without a marker this is the identity.
    pub fn with_power(&self, k: usize) -> TraceRelation {
        let Some(t) = self.trailing else {
            return TraceRelation {
                trailing: None,
                ..self.clone()
            };
        };
        let tail = Word::repeat(t, k);
        TraceRelation {
            letters: self.letters.clone(),
            terms: self.terms.iter().map(|(c, w)| (c.clone(), w.concat(&tail))).collect(),
            trailing: None,
        }
    }

    /// Renames letters: letter `i` becomes `map[i]` in an alphabet with the
    /// given names.
    pub fn relabel(&self, map: &[u8], letters: Vec<String>) -> TraceRelation {
        TraceRelation {
            letters,
            terms: self.terms.iter().map(|(c, w)| (c.clone(), w.relabel(map))).collect(),
            trailing: self.trailing.map(|t| map[t as usize]),
        }
    }

    /// Flips the sign of term `i`.
    pub fn perturbed(&self, i: usize) -> TraceRelation {
        let mut r = self.clone();
        r.terms[i].0 = -r.terms[i].0.clone();
        r
    }

    /// Merges terms whose words agree up to the ambient symmetry.
    pub fn merged(&self, ambient: Ambient) -> Vec<(Rational, Word)> {
        merge_terms(self.terms.iter().cloned(), ambient)
    }

    /// Display with letter names, e.g. `Tr(A1 A2 A0 A3)`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (i, (c, w)) in self.terms.iter().enumerate() {
            let word: Vec<&str> = w.letters().iter().map(|&l| self.letters[l as usize].as_str()).collect();
            let neg = c.is_negative();
            let mag = c.abs();
            let sign = match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let coeff = if mag.is_one() { String::new() } else { format!("{mag}*") };
            let tail = match self.trailing {
                Some(t) => format!(" {}^k", self.letters[t as usize]),
                None => String::new(),
            };
            out.push_str(&format!("{sign}{coeff}Tr({}{tail})", word.join(" ")));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Linear relation on trace coordinates of words over `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearRelation {
    pub n: usize,
    #[serde(with = "crate::exact_algebra::rational_serde::vec")]
    pub coeffs: Vec<Rational>,
    pub words: Vec<Word>,
}

impl LinearRelation {
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Word)> {
        self.coeffs.iter().zip(&self.words)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Common word length.
    pub fn word_length(&self) -> Result<usize> {
        let Some(first) = self.words.first() else {
            return Ok(0);
        };
        for w in &self.words {
            if w.len() != first.len() {
                return Err(Error::MixedLengths(first.len(), w.len()));
            }
        }
        Ok(first.len())
    }

    pub fn merged(&self, ambient: Ambient) -> LinearRelation {
        let terms = merge_terms(self.coeffs.iter().cloned().zip(self.words.iter().cloned()), ambient);
        let (coeffs, words) = terms.into_iter().unzip();
        LinearRelation {
            n: self.n,
            coeffs,
            words,
        }
    }

    /// Coefficients against an ordered basis of canonical representatives.
    /// Words not in the basis are reported as an error.
    pub fn coefficient_vector(&self, basis: &[Word], ambient: Ambient) -> Result<Vec<Rational>> {
        let index: BTreeMap<&Word, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut v = vec![Rational::zero(); basis.len()];
        for (c, w) in self.merged(ambient).terms() {
            let i = index
                .get(w)
                .ok_or_else(|| Error::InvalidParameters(format!("word {w} not in basis")))?;
            v[*i] += c;
        }
        Ok(v)
    }

    /// Scales so that the first coefficient is one.
    pub fn normalized(&self) -> LinearRelation {
        let mut r = self.clone();
        if let Some(c0) = self.coeffs.first().cloned() {
            r.coeffs = r.coeffs.iter().map(|c| c / &c0).collect();
        }
        r
    }
}

impl fmt::Display for LinearRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0 = 0");
        }
        for (i, (c, w)) in self.terms().enumerate() {
            let mag = c.abs();
            let sign = match (i, c.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            if mag.is_one() {
                write!(f, "{sign}T_{w}")?;
            } else {
                write!(f, "{sign}{mag}*T_{w}")?;
            }
        }
        write!(f, " = 0")
    }
}

fn merge_terms(terms: impl Iterator<Item = (Rational, Word)>, ambient: Ambient) -> Vec<(Rational, Word)> {
    let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
    for (c, w) in terms {
        *acc.entry(ambient.canonical(&w)).or_insert_with(Rational::zero) += c;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (c, w))
        .collect()
}

fn permutations(m: usize) -> Vec<(Vec<usize>, bool)> {
    // Heap's algorithm; each swap flips the parity
    let mut p: Vec<usize> = (0..m).collect();
    let mut out = vec![(p.clone(), false)];
    let mut odd = false;
    let mut c = vec![0usize; m];
    let mut i = 1;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            odd = !odd;
            out.push((p.clone(), odd));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out.sort();
    out
}

/// Letter names `A_0, .., A_m, B` of the abstract alphabet.
fn theorem_letters(m: usize) -> Vec<String> {
    let mut v: Vec<String> = (0..=m).map(|i| format!("A{i}")).collect();
    v.push("B".into());
    v
}

/// The signed sum over `sigma in S_m`, `tau in C_{m+1}` of
/// `Tr(A_tau(0) B^sigma(0) .. A_tau(m-1) B^sigma(m-1) A_tau(m))`, with `B`
/// marked as trailing letter. Terms are listed with `sigma` outer and the
/// shift `j` of `tau = i -> i + j` inner; they are not merged.
pub fn ch_relation_with_slot(m: usize) -> Result<TraceRelation> {
    if m == 0 || m + 2 > 10 {
        return Err(Error::InvalidParameters(format!("need 1 <= m <= 8, got {m}")));
    }
    let b = (m + 1) as u8;
    let mut terms = Vec::new();
    for (sigma, odd) in permutations(m) {
        for j in 0..=m {
            let mut letters = Vec::new();
            for i in 0..=m {
                letters.push(((i + j) % (m + 1)) as u8);
                if i < m {
                    letters.extend(std::iter::repeat_n(b, sigma[i]));
                }
            }
            // an (m+1)-cycle has sign (-1)^m
            let neg = odd ^ (m * j % 2 == 1);
            terms.push((if neg { rat(-1) } else { rat(1) }, Word::new(letters)));
        }
    }
    TraceRelation::new(theorem_letters(m), terms, Some(b))
}

/// The relation with `B^ell` appended: `m! (m + 1)` terms.
pub fn generate_ch_relation(m: usize, ell: usize) -> Result<TraceRelation> {
    let r = ch_relation_with_slot(m)?.with_power(ell);
    Ok(r)
}

/// The `m = 2` relation written with `A0` as trailing letter:
/// `Tr(A1 A2 A0 A3 A0^k) + Tr(A2 A3 A0 A1 A0^k) + Tr(A3 A1 A0 A2 A0^k)`
/// equals the same sum with `A0` moved one step left.
pub fn example_relation() -> TraceRelation {
    let r = ch_relation_with_slot(2).expect("m = 2 is valid");
    let names = (0..4).map(|i| format!("A{i}")).collect();
    // A_0 A_1 A_2 B -> A1 A2 A3 A0
    r.relabel(&[1, 2, 3, 0], names)
}

/// Replaces every abstract letter by a word over `[n]`. The trailing power,
/// if any, must be expanded first with [`TraceRelation::with_power`]. Terms
/// are merged up to rotation, which is valid for every `m` and `n`.
pub fn substitute_relation(rel: &TraceRelation, map: &[Word], n: usize) -> Result<LinearRelation> {
    if map.len() != rel.alphabet() {
        return Err(Error::InvalidParameters(format!(
            "substitution has {} words for {} letters",
            map.len(),
            rel.alphabet()
        )));
    }
    for w in map {
        w.check_alphabet(n)?;
    }
    let terms = rel.terms.iter().map(|(c, w)| {
        let mut out = Vec::new();
        for &l in w.letters() {
            out.extend_from_slice(map[l as usize].letters());
        }
        (c.clone(), Word::new(out))
    });
    let (coeffs, words) = merge_terms(terms, Ambient::Cyclic).into_iter().unzip();
    Ok(LinearRelation { n, coeffs, words })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        let odd: Vec<_> = p.iter().filter(|(_, o)| *o).map(|(v, _)| v.clone()).collect();
        assert_eq!(odd, vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]]);
        assert_eq!(permutations(1), vec![(vec![0], false)]);
    }

    #[test]
    fn term_counts() {
        for (m, expect) in [(1, 2), (2, 6), (3, 24), (4, 120)] {
            assert_eq!(generate_ch_relation(m, 1).unwrap().len(), expect);
        }
    }

    #[test]
    fn m1_cancels_cyclically() {
        let r = generate_ch_relation(1, 0).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.merged(Ambient::Cyclic).is_empty());
    }

    #[test]
    fn example_relation_terms() {
        let r = example_relation();
        assert_eq!(r.trailing, Some(0));
        let words = |s: &[&str]| s.iter().map(|w| w.parse::<Word>().unwrap()).collect::<Vec<_>>();
        let plus: Vec<Word> = r
            .terms
            .iter()
            .filter(|(c, _)| c.is_positive())
            .map(|(_, w)| w.clone())
            .collect();
        let minus: Vec<Word> = r
            .terms
            .iter()
            .filter(|(c, _)| c.is_negative())
            .map(|(_, w)| w.clone())
            .collect();
        let mut expect_plus = words(&["1203", "2301", "3102"]);
        let mut expect_minus = words(&["1023", "2031", "3012"]);
        let mut plus = plus;
        let mut minus = minus;
        plus.sort();
        minus.sort();
        expect_plus.sort();
        expect_minus.sort();
        assert_eq!(plus, expect_plus);
        assert_eq!(minus, expect_minus);
        assert_eq!(r.pretty().matches("Tr(").count(), 6);
    }

    #[test]
    fn example_is_trivial_for_small_powers() {
        let r = example_relation();
        for k in 0..2 {
            assert!(r.with_power(k).merged(Ambient::Cyclic).is_empty(), "k = {k}");
        }
        assert!(!r.with_power(2).merged(Ambient::Cyclic).is_empty());
    }

    #[test]
    fn substitution_concatenates_and_merges() {
        let r = TraceRelation::new(
            vec!["X".into(), "Y".into()],
            vec![(rat(1), "01".parse().unwrap()), (rat(-1), "10".parse().unwrap())],
            None,
        )
        .unwrap();
        let s = substitute_relation(&r, &["0".parse().unwrap(), "11".parse().unwrap()], 2).unwrap();
        assert!(s.is_empty());
        let s = substitute_relation(&r.perturbed(1), &["0".parse().unwrap(), "11".parse().unwrap()], 2).unwrap();
        assert_eq!(s.words, vec!["011".parse::<Word>().unwrap()]);
        assert_eq!(s.coeffs, vec![rat(2)]);
        assert!(substitute_relation(&r, &["2".parse().unwrap(), "1".parse().unwrap()], 2).is_err());
    }

    #[test]
    fn rejects_bad_relations() {
        assert!(TraceRelation::new(vec!["X".into()], vec![(rat(0), "0".parse().unwrap())], None).is_err());
        assert!(TraceRelation::new(vec!["X".into()], vec![(rat(1), Word::empty())], None).is_err());
        assert!(TraceRelation::new(vec!["X".into()], vec![(rat(1), "1".parse().unwrap())], None).is_err());
        let mixed = LinearRelation {
            n: 2,
            coeffs: vec![rat(1), rat(1)],
            words: vec!["0".parse().unwrap(), "01".parse().unwrap()],
        };
        assert!(matches!(mixed.word_length(), Err(Error::MixedLengths(1, 2))));
    }
}
