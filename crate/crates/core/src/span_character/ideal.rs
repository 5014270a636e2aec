use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Character, CharacterKind, SpanEngine};
use crate::caps::ResourceCaps;
use crate::combinatorics::{Weight, Word};
use crate::error::{Error, Result};
use crate::exact_algebra::{matrix_rank, CoefficientMatrix, RankMode, SparsePolynomial};
use crate::par;

/// `dim I_{k,w}` together with the sizes it is computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealWeightDim {
    pub d: usize,
    pub k: usize,
    pub w: usize,
    pub multisets: usize,
    pub rank: usize,
    pub dim: usize,
}

/// Multisets of `k` items (given by their weights, sorted increasingly)
/// whose weights add to `w`, as nondecreasing index sequences.
pub fn multisets_by_weight(item_weights: &[usize], k: usize, w: usize) -> Vec<Vec<usize>> {
    fn rec(
        ws: &[usize],
        start: usize,
        k: usize,
        w: usize,
        max_w: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == 0 {
            if w == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if w > k * max_w {
            return;
        }
        for i in start..ws.len() {
            // items sorted by weight, so the smallest remaining choice bounds the rest
            if ws[i] * k > w {
                break;
            }
            cur.push(i);
            rec(ws, i, k - 1, w - ws[i], max_w, cur, out);
            cur.pop();
        }
    }
    debug_assert!(item_weights.windows(2).all(|p| p[0] <= p[1]));
    let max_w = item_weights.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    rec(item_weights, 0, k, w, max_w, &mut Vec::new(), &mut out);
    out
}

impl SpanEngine {
    fn binary_items(&self, d: usize) -> Result<(Vec<Word>, Vec<usize>, Vec<SparsePolynomial>)> {
        let polys = self.binary_bracelet_polys(d)?;
        let mut words = Vec::with_capacity(polys.len());
        let mut ones = Vec::with_capacity(polys.len());
        let mut ps = Vec::with_capacity(polys.len());
        for (b, p) in polys {
            ones.push(b.count(1));
            words.push(b);
            ps.push(p);
        }
        Ok((words, ones, ps))
    }

    /// `dim I_{k,w}`: multisets of `k` bracelets of length `d` with `w` ones
    /// in total, minus the rank of the products of their coordinates.
    pub fn ideal_character_degree_k(&self, d: usize, k: usize, w: usize, mode: RankMode) -> Result<IdealWeightDim> {
        if d == 0 || k == 0 {
            return Err(Error::InvalidParameters("need d, k >= 1".into()));
        }
        if w > k * d {
            return Err(Error::InconsistentWeight {
                weight: vec![k * d - w.min(k * d), w],
                n: 2,
                d: k * d,
            });
        }
        let (words, ones, polys) = self.binary_items(d)?;
        let sets = multisets_by_weight(&ones, k, w);
        ResourceCaps::check("ideal rows", sets.len() as u128, self.caps.max_rows)?;
        let products = par::map(self.exec, &sets, |s| {
            let mut acc = polys[s[0]].clone();
            for &i in &s[1..] {
                acc = &acc * &polys[i];
            }
            acc
        });
        let rank = if products.is_empty() {
            0
        } else {
            let labels = sets
                .iter()
                .map(|s| s.iter().map(|&i| words[i].to_string()).collect::<Vec<_>>().join("*"));
            let cm = CoefficientMatrix::from_polynomials(labels.zip(products.iter()));
            matrix_rank(&cm, mode)
        };
        Ok(IdealWeightDim {
            d,
            k,
            w,
            multisets: sets.len(),
            rank,
            dim: sets.len() - rank,
        })
    }

    /// Character of the degree-`k` part of the ideal of `uMPS(2, 2, d)` in
    /// the space of degree-`k` polynomials in the bracelet coordinates.
    pub fn ideal_character(&self, d: usize, k: usize, mode: RankMode) -> Result<Character> {
        let total = k * d;
        let low: Vec<usize> = (0..=total / 2).collect();
        self.trace_param().fill_to(d, &self.caps, self.exec)?;
        let rows = par::try_map(self.exec, &low, |&w| self.ideal_character_degree_k(d, k, w, mode))?;
        let mut ch = Character {
            kind: CharacterKind::Ideal,
            m: 2,
            n: 2,
            d,
            k,
            mode,
            dims: BTreeMap::new(),
            ambient: BTreeMap::new(),
        };
        for r in rows {
            for w in [r.w, total - r.w] {
                ch.dims.insert(Weight::binary(total, w), r.dim);
                ch.ambient.insert(Weight::binary(total, w), r.multisets);
            }
        }
        Ok(ch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;

    #[test]
    fn multiset_enumeration_counts() {
        // 4 items of weight 0, total count of 2-multisets is C(5, 2)
        assert_eq!(multisets_by_weight(&[0, 0, 0, 0], 2, 0).len() as u128, binomial(5, 2));
        let ws = [0, 1, 1, 2, 3];
        let all: usize = (0..=9).map(|w| multisets_by_weight(&ws, 3, w).len()).sum();
        assert_eq!(all as u128, binomial(5 + 3 - 1, 3));
        for s in multisets_by_weight(&ws, 3, 4) {
            assert_eq!(s.iter().map(|&i| ws[i]).sum::<usize>(), 4);
            assert!(s.windows(2).all(|p| p[0] <= p[1]));
        }
    }

    #[test]
    fn quadrics_small() {
        let e = SpanEngine::default();
        assert_eq!(e.ideal_character_degree_k(6, 2, 3, RankMode::default()).unwrap().dim, 0);
        assert_eq!(e.ideal_character_degree_k(6, 2, 4, RankMode::default()).unwrap().dim, 1);
        let ch = e.ideal_character(6, 2, RankMode::default()).unwrap();
        assert_eq!(ch.table_row(), vec![0, 1, 1, 2]);
    }

    #[test]
    fn quadrics_d8_weight_4() {
        let e = SpanEngine::default();
        let r = e.ideal_character_degree_k(8, 2, 4, RankMode::default()).unwrap();
        assert_eq!(r.dim, 5);
        assert_eq!(r, e.ideal_character_degree_k(8, 2, 4, RankMode::Exact).unwrap());
    }

    #[test]
    fn cubics_d6() {
        let e = SpanEngine::default();
        assert_eq!(e.ideal_character_degree_k(6, 3, 6, RankMode::default()).unwrap().dim, 8);
    }
}
