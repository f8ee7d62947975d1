use std::collections::HashSet;

use rayon::prelude::*;

use super::{check_presentation_arity, require_arity, support_components, trade_graph, GraphError};
use crate::factorization::{direct_trade_coords, Trade};
use crate::semigroup::NumericalSemigroup;

/// A finite set of canonical trades.
///
/// Input trades are normalized to direct form with canonical orientation and
/// deduplicated; anything normalization changed or dropped is recorded in
/// [`Presentation::warnings`]. Trade indices follow first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    trades: Vec<Trade>,
    minimal: bool,
    warnings: Vec<String>,
}

impl Presentation {
    pub fn from_trades<I>(s: &NumericalSemigroup, trades: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vec<u64>, Vec<u64>)>,
    {
        let mut out: Vec<Trade> = Vec::new();
        let mut seen = HashSet::new();
        let mut warnings = Vec::new();
        for (pos, (left, right)) in trades.into_iter().enumerate() {
            let (trade, changed) = Trade::normalize(s, left, right)?;
            if changed {
                warnings.push(format!("trade {pos} normalized to {trade}"));
            }
            if seen.insert(trade.clone()) {
                out.push(trade);
            } else {
                warnings.push(format!("trade {pos} duplicates {trade}; dropped"));
            }
        }
        Ok(Presentation {
            trades: out,
            minimal: false,
            warnings,
        })
    }

    pub fn trades(&self) -> &[Trade] {
        &self.trades
    }

    pub fn len(&self) -> usize {
        self.trades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trades.is_empty()
    }

    /// Set when built by [`minimal_presentation`].
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Multiset of Betti values `beta_i`, sorted.
    pub fn betti_values(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.trades.iter().map(|t| t.betti_value()).collect();
        v.sort_unstable();
        v
    }

    pub fn max_betti(&self) -> Option<u64> {
        self.trades.iter().map(|t| t.betti_value()).max()
    }

    /// The same presentation without trade `idx`.
    pub fn without(&self, idx: usize) -> Presentation {
        let mut trades = self.trades.clone();
        trades.remove(idx);
        Presentation {
            trades,
            minimal: false,
            warnings: Vec::new(),
        }
    }
}

/// First value past which every support graph is connected:
/// `c * (F(S') + n'_{k-1} + n'_k + 1)`.
///
/// If `n/c - n'_i - n'_j > F(S')` for all `i != j`, then for any factorization
/// `z` using generator `i` there is a factorization using both `i` and the
/// first generator; so `z` reaches the clique of factorizations using the
/// first generator in at most two steps and the graph is connected.
pub fn betti_scan_bound(s: &NumericalSemigroup) -> u64 {
    let r = s.reduced_generators();
    let k = r.len();
    let tail = if k >= 2 { r[k - 2] + r[k - 1] } else { r[0] };
    let f = s.frobenius_reduced();
    s.gcd() * ((f + 1) as u64 + tail)
}

/// All `n` in `S` with disconnected support graph, ascending.
pub fn betti_elements(s: &NumericalSemigroup) -> Result<Vec<u64>, GraphError> {
    require_arity(s)?;
    let c = s.gcd();
    let steps = betti_scan_bound(s) / c;
    let found: Vec<u64> = (1..=steps)
        .into_par_iter()
        .map(|m| m * c)
        .filter(|&n| s.contains(n as i64) && support_components(s, n).len() > 1)
        .collect();
    Ok(found)
}

/// A minimal presentation: for each Betti element, the components of its
/// support graph are joined by a star rooted at the component holding the
/// lexicographically least factorization, using each component's least
/// factorization as representative.
pub fn minimal_presentation(s: &NumericalSemigroup) -> Result<Presentation, GraphError> {
    let mut trades = Vec::new();
    for beta in betti_elements(s)? {
        let comps = support_components(s, beta);
        let root = &comps[0][0];
        for comp in &comps[1..] {
            let (l, r) = direct_trade_coords(root, &comp[0]);
            trades.push((l, r));
        }
    }
    let mut p = Presentation::from_trades(s, trades)?;
    p.minimal = true;
    p.warnings.clear();
    Ok(p)
}

/// Least `n` in `S` (up to `scan_bound`) whose trade graph is disconnected,
/// or `None` if `rho` connects every factorization set in range.
///
/// Connectivity below the support-graph bound implies it everywhere: two
/// factorizations sharing generator `i` are connected through
/// `Z(n - n_i)` shifted by `e_i`.
pub fn presentation_failure(
    s: &NumericalSemigroup,
    rho: &Presentation,
    scan_bound: u64,
) -> Result<Option<u64>, GraphError> {
    require_arity(s)?;
    check_presentation_arity(s, rho)?;
    let needed = betti_scan_bound(s);
    if scan_bound < needed {
        return Err(GraphError::BoundTooSmall {
            given: scan_bound,
            needed,
        });
    }
    let c = s.gcd();
    let witness = (1..=scan_bound / c)
        .into_par_iter()
        .map(|m| m * c)
        .filter(|&n| s.contains(n as i64))
        .find_first(|&n| {
            !trade_graph(s, rho, n)
                .expect("arity checked")
                .is_connected()
        });
    Ok(witness)
}

pub fn is_presentation(
    s: &NumericalSemigroup,
    rho: &Presentation,
    scan_bound: u64,
) -> Result<bool, GraphError> {
    Ok(presentation_failure(s, rho, scan_bound)?.is_none())
}
