//! Closed-form edge counts and their brute-force counterparts.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{check_presentation_arity, require_arity, GraphError, Presentation};
use crate::denumerant::{DenumerantTable, SubsetTables};
use crate::factorization::{direct_trade_coords, for_each_factorization, support};
use crate::mask;
use crate::semigroup::NumericalSemigroup;

fn choose2(z: &BigUint) -> BigUint {
    if z.is_zero() {
        return BigUint::zero();
    }
    z * (z - 1u32) / 2u32
}

/// Evaluates
/// `C(|Z(n)|, 2) + sum_{I,J} (-1)^(k-|I|-|J|+1) |Z_I(n)| |Z_J(n)|`
/// over unordered disjoint pairs, reusing denumerant tables across `n`.
#[derive(Debug, Clone)]
pub struct SupportEdgeFormula {
    k: usize,
    tables: SubsetTables,
}

impl SupportEdgeFormula {
    pub fn new(s: &NumericalSemigroup, max_n: u64) -> Result<Self, GraphError> {
        require_arity(s)?;
        Ok(SupportEdgeFormula {
            k: s.k(),
            tables: SubsetTables::new(s, max_n),
        })
    }

    pub fn eval(&self, n: u64) -> BigUint {
        // At n = 0 the zero factorization lies in every Z_I(0) and the
        // inclusion-exclusion no longer counts non-edges; nabla(0) is a
        // single vertex.
        if n == 0 {
            return BigUint::zero();
        }
        let n = n as i64;
        let total = self.tables.count(mask::full(self.k), n);
        let mut acc = BigInt::from(choose2(&total));
        for (i, j) in mask::disjoint_pairs(self.k) {
            let zi = self.tables.table(i).get_ref(n as u64);
            let zj = self.tables.table(j).get_ref(n as u64);
            let (Some(zi), Some(zj)) = (zi, zj) else {
                continue;
            };
            if zi.is_zero() || zj.is_zero() {
                continue;
            }
            let term = BigInt::from(zi * zj);
            let height = self.k - mask::len(i) - mask::len(j);
            if height % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        debug_assert!(!acc.is_negative());
        acc.to_biguint().expect("edge count is nonnegative")
    }
}

/// Closed-form `|E(nabla_S(n))|`.
pub fn edge_count_support_closed(s: &NumericalSemigroup, n: u64) -> Result<BigUint, GraphError> {
    Ok(SupportEdgeFormula::new(s, n)?.eval(n))
}

/// `sum_i |Z(n - beta_i)|`, with one denumerant table shared across `n`.
#[derive(Debug, Clone)]
pub struct TradeEdgeFormula {
    betti: Vec<u64>,
    table: DenumerantTable,
}

impl TradeEdgeFormula {
    pub fn new(s: &NumericalSemigroup, rho: &Presentation, max_n: u64) -> Result<Self, GraphError> {
        check_presentation_arity(s, rho)?;
        Ok(TradeEdgeFormula {
            betti: rho.betti_values(),
            table: DenumerantTable::new(s.generators(), max_n),
        })
    }

    pub fn eval(&self, n: u64) -> BigUint {
        self.betti
            .iter()
            .filter(|&&b| b <= n)
            .map(|&b| self.table.get((n - b) as i64))
            .sum()
    }
}

/// Closed-form `|E(T_{S, rho}(n))|`.
pub fn edge_count_trade_closed(
    s: &NumericalSemigroup,
    rho: &Presentation,
    n: u64,
) -> Result<BigUint, GraphError> {
    Ok(TradeEdgeFormula::new(s, rho, n)?.eval(n))
}

/// Counts support-graph edges pair by pair, without storing them.
pub fn support_edge_count_brute(s: &NumericalSemigroup, n: u64) -> Result<u64, GraphError> {
    require_arity(s)?;
    let mut supports = Vec::new();
    for_each_factorization(s, n, |c| supports.push(support(c)));
    let mut count = 0u64;
    for (i, a) in supports.iter().enumerate() {
        count += supports[i + 1..].iter().filter(|&&b| a & b != 0).count() as u64;
    }
    Ok(count)
}

/// Support-graph edges from one enumeration pass, grouping factorizations by
/// support: two classes contribute `|A||B|` when their supports meet.
pub fn support_edge_count_by_class(s: &NumericalSemigroup, n: u64) -> Result<u64, GraphError> {
    require_arity(s)?;
    let mut classes = vec![0u64; 1 << s.k()];
    for_each_factorization(s, n, |c| classes[support(c) as usize] += 1);
    let occupied: Vec<(usize, u64)> = classes
        .into_iter()
        .enumerate()
        .filter(|&(_, m)| m > 0)
        .collect();
    let mut count = 0u64;
    for (i, &(a, ma)) in occupied.iter().enumerate() {
        if a != 0 {
            count += ma * (ma - 1) / 2;
        }
        for &(b, mb) in &occupied[i + 1..] {
            if a & b != 0 {
                count += ma * mb;
            }
        }
    }
    Ok(count)
}

/// Counts trade-graph edges pair by pair, without storing them.
pub fn trade_edge_count_brute(
    s: &NumericalSemigroup,
    rho: &Presentation,
    n: u64,
) -> Result<u64, GraphError> {
    check_presentation_arity(s, rho)?;
    let gens = s.generators();
    let trades: HashSet<(&[u64], &[u64])> =
        rho.trades().iter().map(|t| (t.left(), t.right())).collect();
    let betti: HashSet<u64> = rho.trades().iter().map(|t| t.betti_value()).collect();
    let mut vertices: Vec<Vec<u64>> = Vec::new();
    for_each_factorization(s, n, |c| vertices.push(c.to_vec()));
    let mut count = 0u64;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            // phi of the direct trade's sides; cheap filter before hashing
            let beta: u64 = a
                .iter()
                .zip(b)
                .zip(gens)
                .map(|((x, y), g)| x.saturating_sub(*y) * g)
                .sum();
            if !betti.contains(&beta) {
                continue;
            }
            let (l, r) = direct_trade_coords(a, b);
            if trades.contains(&(&l[..], &r[..])) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountMismatch {
    pub n: u64,
    pub formula: String,
    pub brute: u64,
}

/// Every `n <= max_n` where the closed support-edge count disagrees with
/// the pairwise count, ascending.
pub fn compare_support_counts(
    s: &NumericalSemigroup,
    max_n: u64,
    parallel: bool,
) -> Result<Vec<CountMismatch>, GraphError> {
    let formula = SupportEdgeFormula::new(s, max_n)?;
    let check = |n: u64| {
        let f = formula.eval(n);
        let b = support_edge_count_brute(s, n).expect("arity checked");
        (f != BigUint::from(b)).then(|| CountMismatch {
            n,
            formula: f.to_string(),
            brute: b,
        })
    };
    Ok(run(max_n, parallel, check))
}

/// Every `n <= max_n` where the closed trade-edge count disagrees with
/// the pairwise count, ascending.
pub fn compare_trade_counts(
    s: &NumericalSemigroup,
    rho: &Presentation,
    max_n: u64,
    parallel: bool,
) -> Result<Vec<CountMismatch>, GraphError> {
    let formula = TradeEdgeFormula::new(s, rho, max_n)?;
    let check = |n: u64| {
        let f = formula.eval(n);
        let b = trade_edge_count_brute(s, rho, n).expect("arity checked");
        (f != BigUint::from(b)).then(|| CountMismatch {
            n,
            formula: f.to_string(),
            brute: b,
        })
    };
    Ok(run(max_n, parallel, check))
}

fn run<F>(max_n: u64, parallel: bool, check: F) -> Vec<CountMismatch>
where
    F: Fn(u64) -> Option<CountMismatch> + Sync + Send,
{
    if parallel {
        (0..=max_n).into_par_iter().filter_map(check).collect()
    } else {
        (0..=max_n).filter_map(check).collect()
    }
}
