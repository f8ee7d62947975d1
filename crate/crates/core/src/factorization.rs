//! Factorizations, their enumeration, and trades.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mask::Mask;
use crate::semigroup::{AperySet, NumericalSemigroup};

/// A factorization `z = (z_1, ..., z_k)` together with the element `phi(z)`
/// it factors. Ordered lexicographically by coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    coords: Vec<u64>,
    value: u64,
}

impl Factorization {
    pub(crate) fn from_parts(coords: Vec<u64>, value: u64) -> Self {
        Factorization { coords, value }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `supp(z)` as a mask over `[k]`.
    pub fn support(&self) -> Mask {
        support(&self.coords)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Factorization) -> Vec<u64> {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| *a.min(b))
            .collect()
    }
}

impl PartialOrd for Factorization {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Factorization {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_coords(&self.coords))
    }
}

pub fn format_coords(coords: &[u64]) -> String {
    let inner: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", inner.join(","))
}

pub fn support(coords: &[u64]) -> Mask {
    coords
        .iter()
        .enumerate()
        .filter(|(_, &z)| z > 0)
        .fold(0, |m, (i, _)| m | (1 << i))
}

/// Recursive descent over coordinates in increasing lexicographic order.
/// A branch is cut as soon as the residual value leaves the semigroup
/// generated by the remaining generators. `visit` returns `false` to stop.
pub(crate) fn descend<F>(generators: &[u64], suffix: &[AperySet], n: u64, visit: &mut F)
where
    F: FnMut(&[u64]) -> bool,
{
    if generators.is_empty() || !suffix[0].contains_u64(n) {
        return;
    }
    let mut coords = vec![0u64; generators.len()];
    step(generators, suffix, 0, n, &mut coords, visit);
}

fn step<F>(
    generators: &[u64],
    suffix: &[AperySet],
    idx: usize,
    residual: u64,
    coords: &mut [u64],
    visit: &mut F,
) -> bool
where
    F: FnMut(&[u64]) -> bool,
{
    let g = generators[idx];
    if idx + 1 == generators.len() {
        if !residual.is_multiple_of(g) {
            return true;
        }
        coords[idx] = residual / g;
        return visit(coords);
    }
    for z in 0..=residual / g {
        let rest = residual - z * g;
        if suffix[idx + 1].contains_u64(rest) {
            coords[idx] = z;
            if !step(generators, suffix, idx + 1, rest, coords, visit) {
                return false;
            }
        }
    }
    coords[idx] = 0;
    true
}

/// `Z_S(n)` in increasing lexicographic order; empty when `n` is not in `S`.
pub fn factorizations(s: &NumericalSemigroup, n: u64) -> Vec<Factorization> {
    let mut out = Vec::new();
    for_each_factorization(s, n, |coords| {
        out.push(Factorization::from_parts(coords.to_vec(), n));
    });
    out
}

/// Streams `Z_S(n)` without collecting it.
pub fn for_each_factorization<F: FnMut(&[u64])>(s: &NumericalSemigroup, n: u64, mut f: F) {
    descend(s.generators(), s.suffix_tables(), n, &mut |coords| {
        f(coords);
        true
    });
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TradeError {
    #[error("factorizations have different values ({0} vs {1})")]
    ValueMismatch(u64, u64),
    #[error("factorizations are identical")]
    IdenticalFactorizations,
    #[error("trade sides have lengths {left} and {right}, expected {expected}")]
    ArityMismatch {
        left: usize,
        right: usize,
        expected: usize,
    },
    #[error("trade {left} ~ {right} is unbalanced ({lv} vs {rv})")]
    Unbalanced {
        left: String,
        right: String,
        lv: u64,
        rv: u64,
    },
    #[error("trade sides coincide")]
    ZeroTrade,
}

/// A trade `(t, t')` with `phi(t) = phi(t')`, kept in direct form
/// (componentwise gcd zero) with `t < t'` lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Trade {
    left: Vec<u64>,
    right: Vec<u64>,
    betti_value: u64,
}

impl Trade {
    /// Normalizes an arbitrary balanced pair to canonical direct form.
    /// The flag reports whether normalization changed the input.
    pub fn normalize(
        s: &NumericalSemigroup,
        left: Vec<u64>,
        right: Vec<u64>,
    ) -> Result<(Trade, bool), TradeError> {
        if left.len() != s.k() || right.len() != s.k() {
            return Err(TradeError::ArityMismatch {
                left: left.len(),
                right: right.len(),
                expected: s.k(),
            });
        }
        let lv = s.evaluate(&left);
        let rv = s.evaluate(&right);
        if lv != rv || lv.is_none() {
            return Err(TradeError::Unbalanced {
                left: format_coords(&left),
                right: format_coords(&right),
                lv: lv.unwrap_or(u64::MAX),
                rv: rv.unwrap_or(u64::MAX),
            });
        }
        if left == right {
            return Err(TradeError::ZeroTrade);
        }
        let trade = direct_pair(s.generators(), &left, &right);
        let changed = trade.left != left || trade.right != right;
        Ok((trade, changed))
    }

    pub fn left(&self) -> &[u64] {
        &self.left
    }

    pub fn right(&self) -> &[u64] {
        &self.right
    }

    /// `phi(t) = phi(t')`.
    pub fn betti_value(&self) -> u64 {
        self.betti_value
    }

    pub fn k(&self) -> usize {
        self.left.len()
    }
}

impl std::fmt::Display for Trade {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {})",
            format_coords(&self.left),
            format_coords(&self.right)
        )
    }
}

fn direct_pair(generators: &[u64], a: &[u64], b: &[u64]) -> Trade {
    let mut left: Vec<u64> = a.iter().zip(b).map(|(x, y)| x - x.min(y)).collect();
    let mut right: Vec<u64> = a.iter().zip(b).map(|(x, y)| y - x.min(y)).collect();
    if right < left {
        std::mem::swap(&mut left, &mut right);
    }
    let betti_value = left.iter().zip(generators).map(|(z, g)| z * g).sum();
    Trade {
        left,
        right,
        betti_value,
    }
}

/// The direct trade `(z - gcd(z, z'), z' - gcd(z, z'))`, canonically oriented.
pub fn direct_trade(
    s: &NumericalSemigroup,
    z: &Factorization,
    other: &Factorization,
) -> Result<Trade, TradeError> {
    if z.len() != s.k() || other.len() != s.k() {
        return Err(TradeError::ArityMismatch {
            left: z.len(),
            right: other.len(),
            expected: s.k(),
        });
    }
    if z.value() != other.value() {
        return Err(TradeError::ValueMismatch(z.value(), other.value()));
    }
    if z.coords() == other.coords() {
        return Err(TradeError::IdenticalFactorizations);
    }
    Ok(direct_pair(s.generators(), z.coords(), other.coords()))
}

/// Direct trade as a raw `(left, right)` pair, skipping validation.
/// Used on hot paths where both inputs come from the same `Z_S(n)`.
pub(crate) fn direct_trade_coords(a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut left: Vec<u64> = a.iter().zip(b).map(|(x, y)| x - x.min(y)).collect();
    let mut right: Vec<u64> = a.iter().zip(b).map(|(x, y)| y - x.min(y)).collect();
    if right < left {
        std::mem::swap(&mut left, &mut right);
    }
    (left, right)
}
