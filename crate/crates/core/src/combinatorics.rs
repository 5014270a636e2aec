//! Words, necklaces and bracelets over the alphabet `[n] = {0, .., n-1}`.
//!
//! Canonical representatives are lexicographic minima over the orbit
//! (rotations for necklaces, rotations and reflections for bracelets).
//! The closed-form counts are kept next to the enumerators so each can be
//! checked against the other.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest alphabet supported; letters are printed as single digits.
pub const MAX_ALPHABET: usize = 10;

/// A finite string over `[n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    /// The word `letter^len`.
    pub fn repeat(letter: u8, len: usize) -> Self {
        Word(vec![letter; len])
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks that every letter lies in `[n]`.
    pub fn check_alphabet(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l as usize >= n) {
            Some(&letter) => Err(Error::LetterOutOfRange { letter, n }),
            None => Ok(()),
        }
    }

    /// Number of occurrences of each symbol of `[n]`.
    pub fn weight(&self, n: usize) -> Weight {
        let mut counts = vec![0; n];
        for &l in &self.0 {
            counts[l as usize] += 1;
        }
        Weight(counts)
    }

    /// Occurrences of a single symbol; for binary words this is the scalar weight.
    pub fn count(&self, letter: u8) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    /// Cyclic shift to the left by `k` positions.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % self.0.len());
        Word(v)
    }

    pub fn reverse(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Applies a letter permutation, e.g. the `0 <-> 1` swap for binary words.
    pub fn relabel(&self, map: &[u8]) -> Word {
        Word(self.0.iter().map(|&l| map[l as usize]).collect())
    }

    /// True if some rotation of `self` contains `pattern` as a cyclic factor.
    pub fn contains_cyclic(&self, pattern: &[u8]) -> bool {
        let d = self.0.len();
        if pattern.is_empty() {
            return true;
        }
        if d == 0 || pattern.len() > d {
            return false;
        }
        (0..d).any(|start| (0..pattern.len()).all(|i| self.0[(start + i) % d] == pattern[i]))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidParameters(format!("bad letter {c:?} in word {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Multiplicity vector of a word: `counts[i]` is the number of `i`s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<usize>);

impl Weight {
    /// Binary weight with `ones` occurrences of the symbol 1 in a word of length `d`.
    pub fn binary(d: usize, ones: usize) -> Weight {
        Weight(vec![d.saturating_sub(ones), ones])
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn check(&self, n: usize, d: usize) -> Result<()> {
        if self.0.len() != n || self.total() != d {
            return Err(Error::InconsistentWeight {
                weight: self.0.clone(),
                n,
                d,
            });
        }
        Ok(())
    }
}

/// Lexicographically least rotation.
pub fn canonical_necklace(w: &Word) -> Word {
    let d = w.len();
    let mut best = 0;
    for r in 1..d {
        if cmp_rotations(w.letters(), r, best) == Ordering::Less {
            best = r;
        }
    }
    w.rotate(best)
}

/// Lexicographically least word over all rotations and reflections.
pub fn canonical_bracelet(w: &Word) -> Word {
    let a = canonical_necklace(w);
    let b = canonical_necklace(&w.reverse());
    a.min(b)
}

fn cmp_rotations(v: &[u8], r: usize, s: usize) -> Ordering {
    let d = v.len();
    for i in 0..d {
        match v[(r + i) % d].cmp(&v[(s + i) % d]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// True if `w` is the least among its rotations.
pub fn is_necklace_rep(w: &Word) -> bool {
    let v = w.letters();
    (1..v.len()).all(|r| cmp_rotations(v, r, 0) != Ordering::Less)
}

/// True if `w` is the least among its rotations and reflections.
pub fn is_bracelet_rep(w: &Word) -> bool {
    is_necklace_rep(w) && *w <= canonical_necklace(&w.reverse())
}

/// A rotation class of words, stored by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Necklace(Word);

impl Necklace {
    pub fn of(w: &Word) -> Self {
        Necklace(canonical_necklace(w))
    }

    pub fn representative(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A rotation-and-reflection class of words, stored by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bracelet(Word);

impl Bracelet {
    pub fn of(w: &Word) -> Self {
        Bracelet(canonical_bracelet(w))
    }

    pub fn representative(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    /// Number of 1s; the scalar weight used throughout the binary pipeline.
    pub fn ones(&self) -> usize {
        self.0.count(1)
    }
}

impl fmt::Display for Bracelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn check_nd(n: usize, weight: Option<&Weight>, d: usize) -> Result<()> {
    if n == 0 || n > MAX_ALPHABET {
        return Err(Error::InvalidParameters(format!(
            "alphabet size n = {n} must be in 1..={MAX_ALPHABET}"
        )));
    }
    if let Some(w) = weight {
        w.check(n, d)?;
    }
    Ok(())
}

/// Visits all words of length `d` over `[n]` (optionally of a fixed weight)
/// in increasing lexicographic order.
fn for_each_word(n: usize, d: usize, weight: Option<&Weight>, mut f: impl FnMut(&[u8])) {
    match weight {
        Some(w) => {
            let mut v: Vec<u8> =
                w.0.iter()
                    .enumerate()
                    .flat_map(|(i, &c)| std::iter::repeat_n(i as u8, c))
                    .collect();
            loop {
                f(&v);
                if !next_permutation(&mut v) {
                    break;
                }
            }
        }
        None => {
            let mut v = vec![0u8; d];
            loop {
                f(&v);
                // odometer increment from the right
                let mut i = d;
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    if (v[i] as usize) + 1 < n {
                        v[i] += 1;
                        for x in &mut v[i + 1..] {
                            *x = 0;
                        }
                        break;
                    }
                }
            }
        }
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All necklaces of length `d` over `[n]`, sorted, optionally of weight `weight`.
pub fn enumerate_necklaces(n: usize, d: usize, weight: Option<&Weight>) -> Result<Vec<Necklace>> {
    check_nd(n, weight, d)?;
    let mut out = Vec::new();
    for_each_word(n, d, weight, |v| {
        let w = Word::from(v);
        if is_necklace_rep(&w) {
            out.push(Necklace(w));
        }
    });
    Ok(out)
}

/// All bracelets of length `d` over `[n]`, sorted, optionally of weight `weight`.
pub fn enumerate_bracelets(n: usize, d: usize, weight: Option<&Weight>) -> Result<Vec<Bracelet>> {
    check_nd(n, weight, d)?;
    let mut out = Vec::new();
    for_each_word(n, d, weight, |v| {
        let w = Word::from(v);
        if is_bracelet_rep(&w) {
            out.push(Bracelet(w));
        }
    });
    Ok(out)
}

/// Binary bracelets of length `d` with exactly `ones` letters equal to 1.
pub fn binary_bracelets(d: usize, ones: usize) -> Result<Vec<Bracelet>> {
    if ones > d {
        return Err(Error::InconsistentWeight {
            weight: vec![0, ones],
            n: 2,
            d,
        });
    }
    enumerate_bracelets(2, d, Some(&Weight::binary(d, ones)))
}

pub(crate) fn divisors(d: usize) -> impl Iterator<Item = usize> {
    (1..=d).filter(move |l| d.is_multiple_of(*l))
}

pub(crate) fn totient(n: usize) -> u128 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u128
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn multinomial(parts: &[usize]) -> u128 {
    let mut total = 0;
    let mut acc: u128 = 1;
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// Number of necklaces of length `d` over `[n]` (Pólya count with Euler's totient).
pub fn count_necklaces(n: usize, d: usize) -> u128 {
    if d == 0 {
        return 1;
    }
    let s: u128 = divisors(d).map(|l| totient(l) * (n as u128).pow((d / l) as u32)).sum();
    s / d as u128
}

/// Number of bracelets of length `d` over `[n]`.
pub fn count_bracelets(n: usize, d: usize) -> u128 {
    if d == 0 {
        return 1;
    }
    let n128 = n as u128;
    // Burnside over D_{2d}: rotations contribute d * N(n, d), reflections the rest.
    let rot = count_necklaces(n, d) * d as u128;
    let refl = if d.is_multiple_of(2) {
        (d as u128 / 2) * (n128 + 1) * n128.pow((d / 2) as u32)
    } else {
        d as u128 * n128.pow(d.div_ceil(2) as u32)
    };
    (rot + refl) / (2 * d as u128)
}

/// Number of necklaces of length `d` and weight `weight`: the coefficient of
/// `x^weight` in `(1/d) * sum_{q | d} phi(q) (x_0^q + .. + x_{n-1}^q)^{d/q}`.
pub fn count_necklaces_weight(n: usize, d: usize, weight: &Weight) -> Result<u128> {
    weight.check(n, d)?;
    if d == 0 {
        return Ok(1);
    }
    let g = weight.0.iter().fold(0usize, |g, &c| g.gcd(&c));
    let s: u128 = divisors(g)
        .map(|q| {
            let parts: Vec<usize> = weight.0.iter().map(|&c| c / q).collect();
            totient(q) * multinomial(&parts)
        })
        .sum();
    Ok(s / d as u128)
}

/// Number of binary bracelets of length `d` with `ones` letters equal to 1.
pub fn count_bracelets_weight_binary(d: usize, ones: usize) -> Result<u128> {
    if ones > d {
        return Err(Error::InconsistentWeight {
            weight: vec![0, ones],
            n: 2,
            d,
        });
    }
    if d == 0 {
        return Ok(1);
    }
    let g = d.gcd(&ones);
    let rot: u128 = divisors(g).map(|l| totient(l) * binomial(d / l, ones / l)).sum();
    // reflection-fixed words, averaged: (1/2) * refl over the group of order 2d
    let refl = match (d % 2, ones % 2) {
        (0, 1) => binomial(d / 2 - 1, (ones - 1) / 2),
        (0, _) => binomial(d / 2, ones / 2),
        _ => binomial((d - 1) / 2, ones / 2),
    };
    Ok((rot + d as u128 * refl) / (2 * d as u128))
}
