use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::primes::{mul_mod, reduce_rational};
use super::Rational;
use crate::error::{Error, Result};

pub type VarId = u32;

/// Named set of polynomial variables. Polynomials may only be combined when
/// they live in the same universe.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    label: String,
    names: Vec<String>,
}

impl Universe {
    pub fn new(label: impl Into<String>, names: Vec<String>) -> Arc<Universe> {
        Arc::new(Universe {
            label: label.into(),
            names,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

fn same_universe(a: &Arc<Universe>, b: &Arc<Universe>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A monomial stored as sorted `(variable, exponent)` pairs with positive exponents.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of
/// the lowest-numbered variable where the two differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary pairs; zero exponents are dropped and
    /// repeated variables merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut m: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_default() += e;
        }
        Monomial(m.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (v as VarId, e))
                .collect(),
        )
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    /// Degree with respect to per-variable weights.
    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.0.iter().map(|&(v, e)| weights[v as usize] * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Renames variables; the map must be injective.
    pub fn rename(&self, map: impl Fn(VarId) -> VarId) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (map(v), e)))
    }

    fn fmt_with(&self, u: &Universe, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", u.name(v))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                        // x's variable is absent from `other`
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match x.1.cmp(&y.1) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            o => return o,
                        },
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct SparsePolynomial {
    universe: Arc<Universe>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for SparsePolynomial {
    fn eq(&self, other: &Self) -> bool {
        same_universe(&self.universe, &other.universe) && self.terms == other.terms
    }
}

impl Eq for SparsePolynomial {}

impl SparsePolynomial {
    pub fn zero(universe: &Arc<Universe>) -> Self {
        SparsePolynomial {
            universe: universe.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(universe: &Arc<Universe>, c: Rational) -> Self {
        Self::term(universe, c, Monomial::one())
    }

    pub fn var(universe: &Arc<Universe>, v: VarId) -> Self {
        assert!(
            (v as usize) < universe.len(),
            "variable {v} outside universe {}",
            universe.label()
        );
        Self::term(universe, Rational::one(), Monomial::var(v))
    }

    pub fn term(universe: &Arc<Universe>, c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero(universe);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms(universe: &Arc<Universe>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(universe);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree if homogeneous under `weights` (None for the zero
    /// polynomial or a non-homogeneous one).
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_universe(&self, other: &Self) -> Result<()> {
        if same_universe(&self.universe, &other.universe) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                left: self.universe.label().to_owned(),
                right: other.universe.label().to_owned(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &Rational::one());
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &-Rational::one());
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self += c * other`; panics on a universe mismatch.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        self.check_universe(other).expect("add_scaled");
        self.add_assign_unchecked(other, c);
    }

    fn add_assign_unchecked(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.universe);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.universe);
        }
        SparsePolynomial {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.universe, Rational::one());
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Exact evaluation; every variable occurring in `self` must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<VarId, Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                let x = assignment
                    .get(&v)
                    .ok_or_else(|| Error::MissingVariable(self.universe.name(v).to_owned()))?;
                t *= num_traits::pow(x.clone(), e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluation from a dense assignment indexed by variable id.
    pub fn eval_dense(&self, values: &[Rational]) -> Result<Rational> {
        let map = values
            .iter()
            .enumerate()
            .map(|(i, x)| (i as VarId, x.clone()))
            .collect();
        self.eval(&map)
    }

    /// Evaluation modulo `p`; `None` if a denominator vanishes mod `p`.
    pub fn eval_mod(&self, values: &[u64], p: u64) -> Result<Option<u64>> {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let Some(mut t) = reduce_rational(c, p) else {
                return Ok(None);
            };
            for &(v, e) in m.pairs() {
                let x = *values
                    .get(v as usize)
                    .ok_or_else(|| Error::MissingVariable(self.universe.name(v).to_owned()))?;
                for _ in 0..e {
                    t = mul_mod(t, x, p);
                }
            }
            acc = (acc + t) % p;
        }
        Ok(Some(acc))
    }

    /// Moves the polynomial into another universe through a variable map.
    pub fn rename(&self, target: &Arc<Universe>, map: impl Fn(VarId) -> VarId) -> Self {
        Self::from_terms(target, self.terms.iter().map(|(m, c)| (m.rename(&map), c.clone())))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> num_bigint::BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.pairs().is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                m.fmt_with(&self.universe, f)?;
            }
        }
        Ok(())
    }
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{rat, ratio};
    use proptest::prelude::*;

    fn xy() -> Arc<Universe> {
        Universe::new("xy", vec!["x".into(), "y".into()])
    }

    #[test]
    fn difference_of_squares() {
        let u = xy();
        let x = SparsePolynomial::var(&u, 0);
        let y = SparsePolynomial::var(&u, 1);
        let p = &(&x + &y) * &(&x - &y);
        let expected = &x.pow(2) - &y.pow(2);
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn cancellation_purges_terms() {
        let u = xy();
        let p = &SparsePolynomial::var(&u, 0) + &SparsePolynomial::constant(&u, rat(3));
        let z = &p + &p.scale(&rat(-1));
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn half_times_two() {
        let u = Universe::new("T", ["T0", "T1", "T00", "T01", "T11"].map(String::from).to_vec());
        let a = SparsePolynomial::term(&u, ratio(1, 2), Monomial::from_pairs([(0, 2)]));
        let b = SparsePolynomial::term(&u, rat(2), Monomial::var(2));
        assert_eq!((&a * &b).to_string(), "T0^2*T00");
    }

    #[test]
    fn evaluation() {
        let u = xy();
        let p = &SparsePolynomial::var(&u, 0).pow(2) + &SparsePolynomial::constant(&u, rat(1));
        assert_eq!(p.eval_dense(&[rat(2)]).unwrap(), rat(5));
        assert_eq!(SparsePolynomial::zero(&u).eval(&BTreeMap::new()).unwrap(), rat(0));
        let q = SparsePolynomial::var(&u, 1);
        assert_eq!(q.eval_dense(&[rat(2)]), Err(Error::MissingVariable("y".into())));
    }

    #[test]
    fn mismatched_universes_error() {
        let a = SparsePolynomial::var(&xy(), 0);
        let other = Universe::new("z", vec!["z".into()]);
        let b = SparsePolynomial::var(&other, 0);
        assert!(matches!(a.checked_add(&b), Err(Error::UniverseMismatch { .. })));
        assert!(a.checked_mul(&b).is_err());
        // structurally equal universes are compatible
        assert!(a.checked_add(&SparsePolynomial::var(&xy(), 1)).is_ok());
    }

    #[test]
    fn graded_lex_order() {
        let x = Monomial::var(0);
        let y = Monomial::var(1);
        let x2 = Monomial::from_pairs([(0, 2)]);
        let xy = x.mul(&y);
        assert!(Monomial::one() < y);
        assert!(y < x);
        assert!(x < xy);
        assert!(xy < x2);
        assert!(Monomial::from_pairs([(1, 2)]) < xy);
    }

    fn arb_poly(u: Arc<Universe>) -> impl Strategy<Value = SparsePolynomial> {
        proptest::collection::vec((0u32..3, 0u32..3, -5i64..5), 0..6).prop_map(move |ts| {
            SparsePolynomial::from_terms(
                &u,
                ts.into_iter().map(|(a, b, c)| (Monomial::from_dense(&[a, b]), rat(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(xy()), q in arb_poly(xy()), r in arb_poly(xy())) {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
        }
    }
}
