//! Posets of disjoint supports.
//!
//! Elements are pairs of disjoint, nonempty, proper subsets `I, J` of `[k]`
//! plus a formal bottom element. In the unordered poset a pair `{I, J}` is
//! stored with `min(I) < min(J)`; in the ordered poset `(I, J)` and `(J, I)`
//! are distinct. Larger elements have smaller sets:
//! `(R, T) <= (I, J)` iff `I` is contained in `R` and `J` in `T` (up to
//! swapping `I` and `J` in the unordered case).
//!
//! The Möbius value `mu(bottom, {I, J})` depends only on the height
//! `k - |I| - |J|` and equals `(-1)^(height + 1)`. The recursive evaluator
//! here exists to check that identity independently.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mask::{self, Mask};

/// Arity cap for explicit materialization.
pub const DEFAULT_ARITY_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("arity k = {0} is too small (need k >= 2)")]
    ArityTooSmall(usize),
    #[error("arity k = {k} exceeds the cap {cap}")]
    ArityCapExceeded { k: usize, cap: usize },
    #[error("({0:#b}, {1:#b}) is not a pair of disjoint nonempty proper subsets of [{2}]")]
    InvalidPair(Mask, Mask, usize),
    #[error("elements {0} and {1} are not comparable")]
    Incomparable(usize, usize),
    #[error("element index {0} out of range")]
    NoSuchElement(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SupportPair {
    first: Mask,
    second: Mask,
    ordered: bool,
}

impl SupportPair {
    pub fn new(k: usize, first: Mask, second: Mask, ordered: bool) -> Result<Self, PosetError> {
        let all = mask::full(k);
        let valid = first != 0
            && second != 0
            && first & second == 0
            && mask::is_subset(first | second, all)
            && first != all
            && second != all;
        if !valid {
            return Err(PosetError::InvalidPair(first, second, k));
        }
        let (first, second) = if !ordered && first.trailing_zeros() > second.trailing_zeros() {
            (second, first)
        } else {
            (first, second)
        };
        Ok(SupportPair {
            first,
            second,
            ordered,
        })
    }

    pub fn first(&self) -> Mask {
        self.first
    }

    pub fn second(&self) -> Mask {
        self.second
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    /// `|I| + |J|`.
    pub fn size(&self) -> usize {
        mask::len(self.first) + mask::len(self.second)
    }

    /// `k - |I| - |J|`; also the dimension of the corresponding cube.
    pub fn height(&self, k: usize) -> usize {
        k - self.size()
    }

    /// `self <= other` in the reverse-containment order.
    pub fn precedes(&self, other: &SupportPair) -> bool {
        let straight =
            mask::is_subset(other.first, self.first) && mask::is_subset(other.second, self.second);
        if self.ordered {
            straight
        } else {
            straight
                || (mask::is_subset(other.first, self.second)
                    && mask::is_subset(other.second, self.first))
        }
    }

    /// Forgets the order of an ordered pair.
    pub fn unordered(&self) -> SupportPair {
        let (a, b) = if self.first.trailing_zeros() < self.second.trailing_zeros() {
            (self.first, self.second)
        } else {
            (self.second, self.first)
        };
        SupportPair {
            first: a,
            second: b,
            ordered: false,
        }
    }

    pub fn label(&self) -> String {
        if self.ordered {
            format!("({},{})", mask::label(self.first), mask::label(self.second))
        } else {
            format!(
                "{{{},{}}}",
                mask::label(self.first),
                mask::label(self.second)
            )
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Bottom,
    Pair(SupportPair),
}

impl Element {
    pub fn pair(&self) -> Option<&SupportPair> {
        match self {
            Element::Bottom => None,
            Element::Pair(p) => Some(p),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Element::Bottom => "0".to_string(),
            Element::Pair(p) => p.label(),
        }
    }
}

/// `(3^k - 2^(k+1) + 1) / 2` unordered pairs; twice that when ordered.
pub fn pair_count(k: usize, ordered: bool) -> u128 {
    let k = k as u32;
    let half = (3u128.pow(k) + 1 - 2u128.pow(k + 1)) / 2;
    if ordered {
        2 * half
    } else {
        half
    }
}

/// An explicitly materialized poset of disjoint supports. Index 0 is the
/// bottom; pairs follow sorted by decreasing `|I| + |J|`, then by masks.
#[derive(Debug)]
pub struct PosetDS {
    k: usize,
    ordered: bool,
    elements: Vec<Element>,
    index: HashMap<SupportPair, usize>,
    memo: Mutex<HashMap<(u32, u32), i64>>,
}

impl Clone for PosetDS {
    fn clone(&self) -> Self {
        PosetDS {
            k: self.k,
            ordered: self.ordered,
            elements: self.elements.clone(),
            index: self.index.clone(),
            memo: Mutex::new(self.memo.lock().unwrap().clone()),
        }
    }
}

/// Builds `P_k` (ordered) or the unordered poset with the default arity cap.
pub fn enumerate_pds(k: usize, ordered: bool) -> Result<PosetDS, PosetError> {
    PosetDS::with_cap(k, ordered, DEFAULT_ARITY_CAP)
}

impl PosetDS {
    pub fn with_cap(k: usize, ordered: bool, cap: usize) -> Result<Self, PosetError> {
        if k < 2 {
            return Err(PosetError::ArityTooSmall(k));
        }
        if k > cap || k > mask::MAX_ARITY {
            return Err(PosetError::ArityCapExceeded { k, cap });
        }
        let mut pairs: Vec<SupportPair> = if ordered {
            mask::ordered_disjoint_pairs(k)
                .map(|(i, j)| SupportPair::new(k, i, j, true).unwrap())
                .collect()
        } else {
            mask::disjoint_pairs(k)
                .map(|(i, j)| SupportPair::new(k, i, j, false).unwrap())
                .collect()
        };
        pairs.sort_by_key(|p| (std::cmp::Reverse(p.size()), p.first, p.second));
        let mut elements = Vec::with_capacity(pairs.len() + 1);
        elements.push(Element::Bottom);
        elements.extend(pairs.iter().copied().map(Element::Pair));
        let index = pairs.iter().enumerate().map(|(i, p)| (*p, i + 1)).collect();
        Ok(PosetDS {
            k,
            ordered,
            elements,
            index,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> Result<&Element, PosetError> {
        self.elements.get(idx).ok_or(PosetError::NoSuchElement(idx))
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn index_of(&self, pair: &SupportPair) -> Option<usize> {
        let key = if self.ordered {
            *pair
        } else {
            pair.unordered()
        };
        self.index.get(&key).copied()
    }

    /// Looks up a pair given as masks; the orientation is ignored when unordered.
    pub fn find(&self, first: Mask, second: Mask) -> Result<usize, PosetError> {
        let p = SupportPair::new(self.k, first, second, self.ordered)?;
        self.index_of(&p)
            .ok_or(PosetError::InvalidPair(first, second, self.k))
    }

    /// Height `k - |I| - |J|`; the bottom is excluded from height bookkeeping.
    pub fn height(&self, idx: usize) -> Option<usize> {
        self.elements[idx].pair().map(|p| p.height(self.k))
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        match (&self.elements[x], &self.elements[y]) {
            (Element::Bottom, _) => true,
            (_, Element::Bottom) => false,
            (Element::Pair(a), Element::Pair(b)) => a.precedes(b),
        }
    }

    /// Pairs `(a, b)` with `b` covering `a`. The poset is graded by
    /// `|I| + |J|` (bottom at rank `k + 1`), so covers differ by one in rank.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let rank = |i: usize| match &self.elements[i] {
            Element::Bottom => self.k + 1,
            Element::Pair(p) => p.size(),
        };
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if a != b && rank(a) == rank(b) + 1 && self.leq(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Indices of all elements `z` with `z <= y`.
    pub fn ideal(&self, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.leq(z, y)).collect()
    }

    /// Indices of all elements `z` with `y <= z`.
    pub fn filter(&self, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.leq(y, z)).collect()
    }

    /// `mu(x, y)` from `mu(x, x) = 1` and `mu(x, y) = -sum_{x <= z < y} mu(x, z)`,
    /// memoized per `(x, y)`.
    pub fn mobius_recursive(&self, x: usize, y: usize) -> Result<i64, PosetError> {
        for i in [x, y] {
            if i >= self.len() {
                return Err(PosetError::NoSuchElement(i));
            }
        }
        if !self.leq(x, y) {
            return Err(PosetError::Incomparable(x, y));
        }
        Ok(self.mu(x, y))
    }

    fn mu(&self, x: usize, y: usize) -> i64 {
        if x == y {
            return 1;
        }
        let key = (x as u32, y as u32);
        if let Some(&v) = self.memo.lock().unwrap().get(&key) {
            return v;
        }
        let mut sum = 0i64;
        for z in 0..self.len() {
            if z != y && self.leq(x, z) && self.leq(z, y) {
                sum += self.mu(x, z);
            }
        }
        let v = -sum;
        self.memo.lock().unwrap().insert(key, v);
        v
    }

    /// Checks the dual inversion identity for `f`: with
    /// `g(y) = sum_{x >= y} f(x)`, every `f(y)` must equal
    /// `sum_{x >= y} g(x) mu(y, x)`.
    pub fn verify_dual_mobius_inversion(&self, f: &[i64]) -> bool {
        assert_eq!(f.len(), self.len(), "f must be total on the poset");
        let n = self.len();
        let ups: Vec<Vec<usize>> = (0..n).map(|y| self.filter(y)).collect();
        let g: Vec<i128> = ups
            .iter()
            .map(|up| up.iter().map(|&x| f[x] as i128).sum())
            .collect();
        (0..n).all(|y| {
            let back: i128 = ups[y].iter().map(|&x| g[x] * self.mu(y, x) as i128).sum();
            back == f[y] as i128
        })
    }

    pub fn to_export(&self) -> PosetExport {
        PosetExport {
            k: self.k,
            ordered: self.ordered,
            elements: self
                .elements
                .iter()
                .map(|e| match e {
                    Element::Bottom => [0, 0],
                    Element::Pair(p) => [p.first, p.second],
                })
                .collect(),
            covers: self.covers().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// `mu(bottom, {I, J}) = (-1)^(k - |I| - |J| + 1)`.
pub fn mobius_closed_form(k: usize, pair: &SupportPair) -> Result<i64, PosetError> {
    // Re-validate against this arity.
    SupportPair::new(k, pair.first, pair.second, pair.ordered)?;
    Ok(if (pair.height(k) + 1).is_multiple_of(2) {
        1
    } else {
        -1
    })
}

/// JSON shape of an exported poset. `elements[0]` is the bottom, written
/// as `[0, 0]`; each cover `[a, b]` means `b` covers `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetExport {
    pub k: usize,
    pub ordered: bool,
    pub elements: Vec<[Mask; 2]>,
    pub covers: Vec<[usize; 2]>,
}
