use serde::{Deserialize, Serialize};

use super::{Character, CharacterKind};

/// Conjectured `D_w` for `uMPS(2, 2, d)`. Weights above `d / 2` use the
/// `w <-> d - w` symmetry.
pub fn conjecture_dim(d: usize, w: usize) -> i128 {
    let w = w.min(d.saturating_sub(w)) as i128;
    let d = d as i128;
    let v = w / 2;
    if w % 2 == 0 {
        1 + d * (v - 1) * v / 2 - 2 * (v - 1) * v * (2 * v - 1) / 3 + v * (d / 2) - 2 * v * v + v
    } else {
        1 + d * v * (v + 1) / 2 - 2 * v * (v + 1) * (2 * v + 1) / 3
    }
}

/// Conjectured `dim <uMPS(2, 2, d)>`.
pub fn conjecture_total(d: usize) -> i128 {
    let d = d as i128;
    let d2 = d * d;
    if d % 2 == 0 {
        (d2 * d2 - 4 * d2 + 192 * d + 192) / 192
    } else {
        (d2 * d2 - 10 * d2 + 192 * d + 201) / 192
    }
}

/// Number of monomials of degree `d` in the graded trace algebra, an upper
/// bound for the span dimension.
pub fn monomial_upper_bound(d: usize) -> i128 {
    let d = d as i128;
    if d % 2 == 0 {
        (d + 6) * (d + 4) * (d + 4) * (d + 2) / 192
    } else {
        (d + 7) * (d + 5) * (d + 3) * (d + 1) / 192
    }
}

/// Computed binary character next to the closed forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub d: usize,
    pub computed: Vec<usize>,
    pub predicted: Vec<i128>,
    pub total: usize,
    pub predicted_total: i128,
    pub upper_bound: i128,
    pub ambient: usize,
}

impl ConjectureRow {
    pub fn from_character(ch: &Character) -> Self {
        assert_eq!(ch.kind, CharacterKind::Span);
        let d = ch.d;
        ConjectureRow {
            d,
            computed: (0..=d).map(|w| ch.binary_dim(w).unwrap_or(0)).collect(),
            predicted: (0..=d).map(|w| conjecture_dim(d, w)).collect(),
            total: ch.total(),
            predicted_total: conjecture_total(d),
            upper_bound: monomial_upper_bound(d),
            ambient: ch.ambient_total(),
        }
    }

    pub fn matches(&self) -> bool {
        self.computed.iter().zip(&self.predicted).all(|(&c, &p)| c as i128 == p)
            && self.total as i128 == self.predicted_total
    }

    /// Weights where prediction and computation differ.
    pub fn mismatches(&self) -> Vec<usize> {
        (0..=self.d)
            .filter(|&w| self.computed[w] as i128 != self.predicted[w])
            .collect()
    }
}
