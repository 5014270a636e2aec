use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Ambient, LinearRelation, TraceRelation};
use crate::combinatorics::Word;
use crate::error::{Error, Result};
use crate::exact_algebra::primes::{add_mod, mul_mod, primes_below_power_of_two, reduce_rational};
use crate::exact_algebra::{matrix_rank, DenseMatrix, Fp, RankMode, Rational, SparsePolynomial};
use crate::par::{self, Exec};
use crate::span_character::{SpanEngine, SpanRequest};
use crate::trace_calculus::GenericMatrixTuple;

/// What the abstract letters of a relation stand for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assignment {
    /// One generic matrix per letter.
    Generic,
    /// Letter `i` is the product of generic matrices spelled by `words[i]`
    /// over an alphabet of size `n`.
    Words { n: usize, words: Vec<Word> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerificationMode {
    Symbolic,
    RandomizedNumeric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularTrials {
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCertificate {
    pub letters: Vec<String>,
    #[serde(with = "crate::exact_algebra::rational_serde::vec")]
    pub coeffs: Vec<Rational>,
    pub words: Vec<Word>,
    pub trailing: Option<String>,
    #[serde(rename = "certificate")]
    pub mode: VerificationMode,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modular: Option<ModularTrials>,
    pub m: usize,
    pub verified_k: Vec<usize>,
    pub identically_zero: bool,
    pub failing_k: Option<usize>,
}

impl RelationCertificate {
    fn from_relation(rel: &TraceRelation, m: usize, mode: VerificationMode) -> Self {
        RelationCertificate {
            letters: rel.letters.clone(),
            coeffs: rel.terms.iter().map(|(c, _)| c.clone()).collect(),
            words: rel.terms.iter().map(|(_, w)| w.clone()).collect(),
            trailing: rel.trailing.map(|t| rel.letters[t as usize].clone()),
            mode,
            modular: None,
            m,
            verified_k: Vec::new(),
            identically_zero: false,
            failing_k: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}

/// Terms over the concrete alphabet the generic matrices are indexed by.
fn concrete_terms(rel: &TraceRelation, assignment: &Assignment) -> Result<(usize, Vec<(Rational, Word)>)> {
    match assignment {
        Assignment::Generic => Ok((rel.alphabet(), rel.terms.clone())),
        Assignment::Words { n, words } => {
            if words.len() != rel.alphabet() {
                return Err(Error::InvalidParameters(format!(
                    "assignment has {} words for {} letters",
                    words.len(),
                    rel.alphabet()
                )));
            }
            for w in words {
                w.check_alphabet(*n)?;
            }
            let expanded = rel
                .terms
                .iter()
                .map(|(c, w)| {
                    let mut out = Vec::new();
                    for &l in w.letters() {
                        out.extend_from_slice(words[l as usize].letters());
                    }
                    (c.clone(), Word::new(out))
                })
                .collect();
            Ok((*n, expanded))
        }
    }
}

fn symbolic_sum(m: usize, n: usize, terms: &[(Rational, Word)], exec: Exec) -> Result<SparsePolynomial> {
    let tuple = GenericMatrixTuple::new(m, n)?;
    let polys = par::try_map(exec, terms, |(c, w)| Ok(tuple.trace_of_word(w)?.scale(c)))?;
    let mut acc = SparsePolynomial::zero(tuple.universe());
    for p in &polys {
        acc.add_scaled(p, &Rational::from_integer(1.into()));
    }
    Ok(acc)
}

/// Expands `sum_j c_j Tr(word_j)` with `m x m` generic matrices. A trailing
/// marker is read as `k = 0`.
pub fn verify_relation_symbolic(
    rel: &TraceRelation,
    m: usize,
    assignment: &Assignment,
    exec: Exec,
) -> Result<RelationCertificate> {
    let (n, terms) = concrete_terms(&rel.with_power(0), assignment)?;
    let sum = symbolic_sum(m, n, &terms, exec)?;
    let mut cert = RelationCertificate::from_relation(rel, m, VerificationMode::Symbolic);
    cert.identically_zero = sum.is_zero();
    if rel.trailing.is_some() {
        cert.verified_k = if cert.identically_zero { vec![0] } else { vec![] };
        cert.failing_k = (!cert.identically_zero).then_some(0);
    }
    Ok(cert)
}

fn random_matrix(rng: &mut ChaCha8Rng, m: usize, p: u64) -> DenseMatrix<Fp> {
    DenseMatrix::from_fn(m, |_, _| Fp::new(rng.gen_range(0..p), p))
}

/// Whether `sum_j c_j Tr(word_j)` vanishes at `trials` random points of
/// `(F_p^{m x m})^n`.
pub(crate) fn vanishes_mod_p(
    m: usize,
    n: usize,
    terms: &[(Rational, Word)],
    trials: usize,
    p: u64,
    seed: u64,
) -> Result<bool> {
    let coeffs: Vec<u64> = terms
        .iter()
        .map(|(c, _)| {
            reduce_rational(c, p)
                .ok_or_else(|| Error::InvalidParameters(format!("coefficient {c} not invertible mod {p}")))
        })
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mats: Vec<DenseMatrix<Fp>> = (0..n).map(|_| random_matrix(&mut rng, m, p)).collect();
        let mut acc = 0u64;
        for ((_, w), c) in terms.iter().zip(&coeffs) {
            let tr = DenseMatrix::word_product(&mats, w.letters()).trace().value;
            acc = add_mod(acc, mul_mod(*c, tr, p), p);
        }
        if acc != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates the relation at `trials` random integer matrix tuples modulo the
/// largest prime below `2^61`. Probabilistic: a nonzero polynomial of degree
/// `D` vanishes at a random point with probability at most `D / p`.
pub fn verify_relation_modular(
    rel: &TraceRelation,
    m: usize,
    assignment: &Assignment,
    trials: usize,
    seed: u64,
) -> Result<RelationCertificate> {
    let p = primes_below_power_of_two(61, 1)[0];
    let (n, terms) = concrete_terms(&rel.with_power(0), assignment)?;
    let mut cert = RelationCertificate::from_relation(rel, m, VerificationMode::RandomizedNumeric);
    cert.identically_zero = vanishes_mod_p(m, n, &terms, trials, p, seed)?;
    cert.modular = Some(ModularTrials { trials, prime: p, seed });
    if rel.trailing.is_some() {
        cert.verified_k = if cert.identically_zero { vec![0] } else { vec![] };
        cert.failing_k = (!cert.identically_zero).then_some(0);
    }
    Ok(cert)
}

/// Checks the trailing-power family for `k = 0, .., m - 1`, which implies
/// it for every `k`, then spot-checks `k = m, m + 1`. Symbolic for
/// `m <= 2`, randomized (50 trials) above.
pub fn ch_extend(rel: &TraceRelation, m: usize, exec: Exec) -> Result<RelationCertificate> {
    if rel.trailing.is_none() {
        return Err(Error::InvalidParameters("relation has no trailing-power letter".into()));
    }
    let symbolic = m <= 2;
    let mode = if symbolic {
        VerificationMode::Symbolic
    } else {
        VerificationMode::RandomizedNumeric
    };
    let mut cert = RelationCertificate::from_relation(rel, m, mode);
    let p = primes_below_power_of_two(61, 1)[0];
    if !symbolic {
        cert.modular = Some(ModularTrials {
            trials: 50,
            prime: p,
            seed: 0,
        });
    }
    for k in 0..m + 2 {
        let inst = rel.with_power(k);
        let ok = if symbolic {
            symbolic_sum(m, inst.alphabet(), &inst.terms, exec)?.is_zero()
        } else {
            vanishes_mod_p(m, inst.alphabet(), &inst.terms, 50, p, k as u64)?
        };
        if !ok {
            cert.failing_k = Some(k);
            cert.identically_zero = false;
            return Ok(cert);
        }
        cert.verified_k.push(k);
    }
    cert.identically_zero = true;
    Ok(cert)
}

/// Outcome of [`certify_nontrivial`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nontriviality {
    pub d: usize,
    pub m: usize,
    pub ambient: Ambient,
    pub merged: LinearRelation,
    pub nontrivial: bool,
    /// The relation vanishes on `uMPS(m, n, d)`.
    pub annihilates_span: bool,
    #[serde(rename = "certificate")]
    pub mode: VerificationMode,
}

impl Nontriviality {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coeffs": self.merged.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "words": self.merged.words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "ambient": self.ambient.as_str(),
            "certificate": self.mode,
            "m": self.m,
            "n": self.merged.n,
            "d": self.d,
            "nontrivial": self.nontrivial,
            "annihilates_span": self.annihilates_span,
        })
    }
}

/// Decides whether the relation survives merging by the ambient symmetry and
/// checks that it vanishes on `uMPS(m, n, d)`: through the trace
/// parametrization for `m = n = 2`, by generic expansion when within the
/// symbolic cap, and by 50 random modular evaluations otherwise.
pub fn certify_nontrivial(
    rel: &LinearRelation,
    d: usize,
    ambient: Ambient,
    m: usize,
    engine: &SpanEngine,
) -> Result<Nontriviality> {
    let len = rel.word_length()?;
    if !rel.is_empty() && len != d {
        return Err(Error::InvalidParameters(format!(
            "relation has length {len}, expected {d}"
        )));
    }
    let merged = rel.merged(ambient);
    let terms: Vec<(Rational, Word)> = merged
        .coeffs
        .iter()
        .cloned()
        .zip(merged.words.iter().cloned())
        .collect();
    let n = rel.n;
    let (annihilates, mode) = if m == 2 && n == 2 {
        let tp = engine.trace_param();
        tp.fill_to(d.saturating_sub(1), &engine.caps, engine.exec)?;
        let polys = par::try_map(engine.exec, &terms, |(c, w)| Ok(tp.reduce_word(w)?.scale(c)))?;
        let mut acc = SparsePolynomial::zero(crate::trace_param::trace_universe());
        for p in &polys {
            acc.add_scaled(p, &Rational::from_integer(1.into()));
        }
        (acc.is_zero(), VerificationMode::Symbolic)
    } else if (m * m * n * d) as u128 <= engine.caps.max_symbolic_size {
        (
            symbolic_sum(m, n, &terms, engine.exec)?.is_zero(),
            VerificationMode::Symbolic,
        )
    } else {
        let p = primes_below_power_of_two(61, 1)[0];
        (
            vanishes_mod_p(m, n, &terms, 50, p, 0)?,
            VerificationMode::RandomizedNumeric,
        )
    };
    Ok(Nontriviality {
        d,
        m,
        ambient,
        nontrivial: !merged.is_empty(),
        merged,
        annihilates_span: annihilates,
        mode,
    })
}

/// A binary relation of uniform weight compared with the weight space of
/// `<uMPS(2, 2, d)>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub d: usize,
    pub ones: usize,
    pub bracelets: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// The bracelet-coefficient vector annihilates the coefficient matrix.
    pub in_kernel: bool,
    /// Nonzero, in the kernel, and the kernel is one-dimensional.
    pub spans_kernel: bool,
}

/// Places the dihedrally merged relation in the left kernel of the weight-`w`
/// coefficient matrix of the trace parametrization.
pub fn binary_kernel_check(rel: &LinearRelation, engine: &SpanEngine, mode: RankMode) -> Result<KernelCheck> {
    if rel.n != 2 {
        return Err(Error::InvalidParameters("kernel check needs a binary relation".into()));
    }
    let d = rel.word_length()?;
    let merged = rel.merged(Ambient::Dihedral);
    let ones = merged.words.first().map(|w| w.count(1)).unwrap_or(0);
    if merged.words.iter().any(|w| w.count(1) != ones) {
        return Err(Error::InvalidParameters("relation mixes weights".into()));
    }
    let cm = engine.coefficient_matrix(&SpanRequest::binary(d, ones).with_mode(mode))?;
    let basis: Vec<Word> = cm.row_labels().iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let v = merged.coefficient_vector(&basis, Ambient::Dihedral)?;
    let mut combo = vec![Rational::zero(); cm.ncols()];
    for (i, c) in v.iter().enumerate() {
        for (j, x) in cm.row(i) {
            combo[*j] += c * x;
        }
    }
    let in_kernel = combo.iter().all(|x| x.is_zero());
    let rank = matrix_rank(&cm, mode);
    let kernel_dim = cm.nrows() - rank;
    let nonzero = v.iter().any(|x| !x.is_zero());
    Ok(KernelCheck {
        d,
        ones,
        bracelets: cm.nrows(),
        rank,
        kernel_dim,
        in_kernel,
        spans_kernel: in_kernel && nonzero && kernel_dim == 1,
    })
}


#[cfg(test)]
mod certify_tests {
    use super::*;
    use crate::ch_relations::{corollary_relation, example_d8_relation, remark_relation, w3_reduce, LinearRelation};
    use crate::exact_algebra::rat;

    #[test]
    fn d8_relation_spans_the_kernel() {
        let e = SpanEngine::default();
        let rel = example_d8_relation().unwrap();
        let cert = certify_nontrivial(&rel, 8, Ambient::Dihedral, 2, &e).unwrap();
        assert!(cert.nontrivial && cert.annihilates_span);
        let cm = e.coefficient_matrix(&SpanRequest::binary(8, 4)).unwrap();
        let basis: Vec<Word> = cm.row_labels().iter().map(|s| s.parse().unwrap()).collect();
        let v = rel.coefficient_vector(&basis, Ambient::Dihedral).unwrap();
        let kernel = cm.left_kernel();
        assert_eq!(kernel.len(), 1);
        let i = v.iter().position(|c| !c.is_zero()).unwrap();
        let s = &kernel[0][i] / &v[i];
        assert!(v.iter().zip(&kernel[0]).all(|(a, b)| a * &s == *b));
        assert_eq!(matrix_rank_of(&e), 7);
        let k = binary_kernel_check(&rel, &e, RankMode::Exact).unwrap();
        assert_eq!((k.bracelets, k.rank, k.kernel_dim), (8, 7, 1));
        assert!(k.spans_kernel);
    }

    fn matrix_rank_of(e: &SpanEngine) -> usize {
        e.span_dimension_weight(&SpanRequest::binary(8, 4).with_mode(RankMode::Exact))
            .unwrap()
    }

    #[test]
    fn rotation_identity_is_trivial() {
        let e = SpanEngine::default();
        let rel = LinearRelation {
            n: 3,
            coeffs: vec![rat(1), rat(-1)],
            words: vec!["012".parse().unwrap(), "120".parse().unwrap()],
        };
        let cert = certify_nontrivial(&rel, 3, Ambient::Cyclic, 2, &e).unwrap();
        assert!(!cert.nontrivial);
        assert!(cert.annihilates_span);
        // the reflection is not a symmetry for three letters
        let refl = LinearRelation {
            n: 3,
            coeffs: vec![rat(1), rat(-1)],
            words: vec!["012".parse().unwrap(), "210".parse().unwrap()],
        };
        assert!(
            !certify_nontrivial(&refl, 3, Ambient::Cyclic, 2, &e)
                .unwrap()
                .annihilates_span
        );
    }

    #[test]
    fn corollary_is_nontrivial() {
        let e = SpanEngine::default();
        for (ell, d) in [(2, 6), (3, 7), (6, 10)] {
            let rel = corollary_relation(2, ell).unwrap();
            let cert = certify_nontrivial(&rel, d, Ambient::Cyclic, 2, &e).unwrap();
            assert!(cert.nontrivial && cert.annihilates_span, "ell = {ell}");
            assert_eq!(cert.merged.len(), 6);
        }
    }

    #[test]
    fn remark_relation_by_ambient() {
        let e = SpanEngine::default();
        // m = 2: six distinct necklaces, but each cancels against its mirror image
        let rel = remark_relation(2).unwrap();
        let cyc = certify_nontrivial(&rel, 10, Ambient::Cyclic, 2, &e).unwrap();
        assert!(cyc.nontrivial && cyc.annihilates_span);
        assert_eq!(cyc.merged.len(), 6);
        assert!(
            !certify_nontrivial(&rel, 10, Ambient::Dihedral, 2, &e)
                .unwrap()
                .nontrivial
        );
        // m = 3 lives in the cyclic ambient space
        let rel = remark_relation(3).unwrap();
        let cert = certify_nontrivial(&rel, 15, Ambient::Cyclic, 3, &e).unwrap();
        assert!(cert.nontrivial && cert.annihilates_span);
        assert_eq!(cert.merged.len(), 24);
        assert_eq!(cert.mode, VerificationMode::RandomizedNumeric);
    }

    #[test]
    fn w3_reduction_holds_on_span() {
        let e = SpanEngine::default();
        let b: Word = "1000100100".parse().unwrap();
        let red = w3_reduce(&b).unwrap();
        let mut coeffs = red.coeffs.clone();
        coeffs.push(rat(-1));
        let mut words = red.words.clone();
        words.push(red.target.clone());
        let rel = LinearRelation { n: 2, coeffs, words };
        assert!(
            certify_nontrivial(&rel, 10, Ambient::Dihedral, 2, &e)
                .unwrap()
                .annihilates_span
        );
    }
}
