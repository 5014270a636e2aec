//! Characters of the linear span of `uMPS(m, n, d)` and of the low-degree
//! parts of its ideal.
//!
//! By the span/coefficient-matrix correspondence, the dimension of the
//! weight-`λ` part of the span equals the rank of the matrix whose rows are
//! the coefficient vectors of the coordinate polynomials of weight `λ`.

mod formulas;
mod ideal;
mod specialize;

pub use formulas::{conjecture_dim, conjecture_total, monomial_upper_bound, ConjectureRow};
pub use ideal::{multisets_by_weight, IdealWeightDim};
pub use specialize::{tilde_b3, BraceletSubset, Specialization};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::caps::ResourceCaps;
use crate::combinatorics::{enumerate_bracelets, enumerate_necklaces, Weight, Word};
use crate::error::{Error, Result};
use crate::exact_algebra::{matrix_rank, CoefficientMatrix, RankMode, SparsePolynomial};
use crate::par::{self, Exec};
use crate::trace_calculus::{uses_bracelets, GenericMatrixTuple};
use crate::trace_param::TraceParam;

/// Where the generator polynomials come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorSource {
    /// Five-variable trace parametrization (`m = n = 2` only).
    #[default]
    TraceParam,
    /// Traces in generic matrices, `m^2 n` variables.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanRequest {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub weight: Weight,
    pub source: GeneratorSource,
    pub mode: RankMode,
}

impl SpanRequest {
    /// Weight-`ones` request for `uMPS(2, 2, d)`.
    pub fn binary(d: usize, ones: usize) -> Self {
        SpanRequest {
            m: 2,
            n: 2,
            d,
            weight: Weight::binary(d, ones),
            source: GeneratorSource::TraceParam,
            mode: RankMode::default(),
        }
    }

    pub fn with_source(mut self, source: GeneratorSource) -> Self {
        self.source = source;
        self
    }

    pub fn with_mode(mut self, mode: RankMode) -> Self {
        self.mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 || self.m == 0 {
            return Err(Error::InvalidParameters("need m, d >= 1".into()));
        }
        self.weight.check(self.n, self.d)?;
        if self.source == GeneratorSource::TraceParam && !uses_bracelets(self.m, self.n) {
            return Err(Error::InvalidParameters(
                "the trace parametrization needs m = n = 2".into(),
            ));
        }
        Ok(())
    }
}

/// Whether a [`Character`] describes the span or an ideal component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharacterKind {
    Span,
    Ideal,
}

/// Weight-space dimensions of a `GL_n`-representation.
///
/// For the span, `ambient[λ]` counts orbits (bracelets or necklaces) of
/// weight `λ`; for a degree-`k` ideal part, `ambient[λ]` counts multisets of
/// `k` orbits of total weight `λ` and `dims[λ]` is the ideal dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    pub kind: CharacterKind,
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub mode: RankMode,
    #[serde(with = "weight_map")]
    pub dims: BTreeMap<Weight, usize>,
    #[serde(with = "weight_map")]
    pub ambient: BTreeMap<Weight, usize>,
}

impl Character {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn ambient_total(&self) -> usize {
        self.ambient.values().sum()
    }

    /// `D_w` for a binary character, `w` counting 1s.
    pub fn binary_dim(&self, ones: usize) -> Option<usize> {
        self.dims.get(&Weight::binary(self.k * self.d, ones)).copied()
    }

    /// Scalar weights printed in the reference table layouts: `0..=d/2` for
    /// the span, `3..=kd/2` for ideal parts.
    pub fn table_weights(&self) -> std::ops::RangeInclusive<usize> {
        let top = self.k * self.d / 2;
        match self.kind {
            CharacterKind::Span => 0..=top,
            CharacterKind::Ideal => 3..=top,
        }
    }

    /// `D_w` over [`Character::table_weights`].
    pub fn table_row(&self) -> Vec<usize> {
        self.table_weights().map(|w| self.binary_dim(w).unwrap_or(0)).collect()
    }

    /// CSV row `d,D_..,..[,total,ambient]` matching the table layouts.
    pub fn to_csv_row(&self) -> String {
        let mut fields: Vec<String> = vec![self.d.to_string()];
        fields.extend(self.table_row().iter().map(|x| x.to_string()));
        if self.kind == CharacterKind::Span {
            fields.push(self.total().to_string());
            fields.push(self.ambient_total().to_string());
        }
        fields.join(",")
    }

    pub fn csv_header(&self) -> String {
        let mut fields = vec!["d".to_string()];
        fields.extend(self.table_weights().map(|w| format!("D_{w}")));
        if self.kind == CharacterKind::Span {
            fields.push("total".into());
            fields.push("ambient".into());
        }
        fields.join(",")
    }
}

mod weight_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::combinatorics::Weight;

    fn key(w: &Weight) -> String {
        w.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<Weight, usize>, s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|(w, d)| (key(w), *d))
            .collect::<BTreeMap<String, usize>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Weight, usize>, D::Error> {
        let raw = BTreeMap::<String, usize>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let w: Result<Vec<usize>, _> = k.split(',').map(str::parse).collect();
                w.map(|w| (Weight(w), v)).map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// All weight vectors of `n` parts summing to `d`.
pub fn weights(n: usize, d: usize) -> Vec<Weight> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Weight>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(Weight(cur.clone()));
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(n, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Representative of the `S_n` orbit of a weight (counts sorted decreasingly).
fn dominant(w: &Weight) -> Weight {
    let mut v = w.0.clone();
    v.sort_unstable_by(|a, b| b.cmp(a));
    Weight(v)
}

/// Shared state for span and ideal computations: the trace-parametrization
/// cache, resource caps and the execution strategy.
#[derive(Debug, Default)]
pub struct SpanEngine {
    pub caps: ResourceCaps,
    pub exec: Exec,
    trace_param: TraceParam,
}

impl SpanEngine {
    pub fn new(caps: ResourceCaps, exec: Exec) -> Self {
        SpanEngine {
            caps,
            exec,
            trace_param: TraceParam::new(),
        }
    }

    pub fn trace_param(&self) -> &TraceParam {
        &self.trace_param
    }

    /// Orbit representatives of weight `λ` and their coordinate polynomials.
    pub fn generators(&self, req: &SpanRequest) -> Result<Vec<(Word, SparsePolynomial)>> {
        req.validate()?;
        let (m, n, d) = (req.m, req.n, req.d);
        match req.source {
            GeneratorSource::TraceParam => {
                let slice = self
                    .trace_param
                    .weight_slice(d, req.weight.0[1], &self.caps, self.exec)?;
                ResourceCaps::check("generator rows", slice.len() as u128, self.caps.max_rows)?;
                Ok(slice.into_iter().map(|(b, p)| (b.into_word(), (*p).clone())).collect())
            }
            GeneratorSource::Generic => {
                ResourceCaps::check("m^2*n*d", (m * m * n * d) as u128, self.caps.max_symbolic_size)?;
                let reps: Vec<Word> = if uses_bracelets(m, n) {
                    enumerate_bracelets(n, d, Some(&req.weight))?
                        .into_iter()
                        .map(|b| b.into_word())
                        .collect()
                } else {
                    enumerate_necklaces(n, d, Some(&req.weight))?
                        .into_iter()
                        .map(|b| b.into_word())
                        .collect()
                };
                ResourceCaps::check("generator rows", reps.len() as u128, self.caps.max_rows)?;
                let tuple = GenericMatrixTuple::new(m, n)?;
                let polys = par::try_map(self.exec, &reps, |w| tuple.trace_of_word(w))?;
                Ok(reps.into_iter().zip(polys).collect())
            }
        }
    }

    /// Coefficient matrix of the weight-`λ` generators.
    pub fn coefficient_matrix(&self, req: &SpanRequest) -> Result<CoefficientMatrix> {
        let gens = self.generators(req)?;
        Ok(CoefficientMatrix::from_polynomials(
            gens.iter().map(|(w, p)| (w.to_string(), p)),
        ))
    }

    /// `dim <uMPS(m, n, d)>_λ`.
    pub fn span_dimension_weight(&self, req: &SpanRequest) -> Result<usize> {
        let gens = self.generators(req)?;
        if gens.is_empty() {
            return Ok(0);
        }
        let cm = CoefficientMatrix::from_polynomials(gens.iter().map(|(w, p)| (w.to_string(), p)));
        Ok(matrix_rank(&cm, req.mode))
    }

    /// Character of `<uMPS(m, n, d)>`. Only dominant weights are computed;
    /// the others follow from the letter-permutation symmetry.
    pub fn character_of_span(
        &self,
        m: usize,
        n: usize,
        d: usize,
        source: GeneratorSource,
        mode: RankMode,
    ) -> Result<Character> {
        let all = weights(n, d);
        let doms: Vec<Weight> = {
            let mut v: Vec<Weight> = all.iter().map(dominant).collect();
            v.sort();
            v.dedup();
            v
        };
        if source == GeneratorSource::TraceParam {
            // shorter bracelets first, so the weight jobs only read the cache
            self.trace_param.fill_to(d.saturating_sub(1), &self.caps, self.exec)?;
        }
        let dims = par::try_map(self.exec, &doms, |w| {
            self.span_dimension_weight(&SpanRequest {
                m,
                n,
                d,
                weight: w.clone(),
                source,
                mode,
            })
        })?;
        let by_dom: BTreeMap<Weight, usize> = doms.into_iter().zip(dims).collect();
        let mut ch = Character {
            kind: CharacterKind::Span,
            m,
            n,
            d,
            k: 1,
            mode,
            dims: BTreeMap::new(),
            ambient: BTreeMap::new(),
        };
        for w in all {
            ch.dims.insert(w.clone(), by_dom[&dominant(&w)]);
            let amb = if uses_bracelets(m, n) {
                enumerate_bracelets(n, d, Some(&w))?.len()
            } else {
                enumerate_necklaces(n, d, Some(&w))?.len()
            };
            ch.ambient.insert(w, amb);
        }
        Ok(ch)
    }

    /// Character of `<uMPS(2, 2, d)>` from the trace parametrization.
    pub fn binary_character(&self, d: usize, mode: RankMode) -> Result<Character> {
        self.character_of_span(2, 2, d, GeneratorSource::TraceParam, mode)
    }

    /// Binary span dimensions for every weight, computed directly without
    /// using the `w <-> d - w` symmetry.
    pub fn binary_dims_unmirrored(&self, d: usize, mode: RankMode) -> Result<Vec<usize>> {
        let ws: Vec<usize> = (0..=d).collect();
        self.trace_param.fill_to(d.saturating_sub(1), &self.caps, self.exec)?;
        par::try_map(self.exec, &ws, |&w| {
            self.span_dimension_weight(&SpanRequest::binary(d, w).with_mode(mode))
        })
    }

    pub(crate) fn binary_bracelet_polys(&self, d: usize) -> Result<Vec<(Word, SparsePolynomial)>> {
        let mut out = Vec::new();
        for w in 0..=d {
            out.extend(
                self.trace_param
                    .weight_slice(d, w, &self.caps, self.exec)?
                    .into_iter()
                    .map(|(b, p)| (b.into_word(), (*p).clone())),
            );
        }
        debug_assert_eq!(out.len(), enumerate_bracelets(2, d, None)?.len());
        Ok(out)
    }
}
