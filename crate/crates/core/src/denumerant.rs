//! Exact denumerants `|Z(n)|` by dynamic programming over generators.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::mask::Mask;
use crate::semigroup::{NumericalSemigroup, SemigroupError};

/// `|Z(n)|` for all `n <= max` over a fixed list of generators, which need
/// not be minimal. Only multiples of the gcd are stored.
#[derive(Debug, Clone)]
pub struct DenumerantTable {
    gcd: u64,
    max: u64,
    counts: Vec<BigUint>,
}

impl DenumerantTable {
    pub fn new(generators: &[u64], max: u64) -> Self {
        assert!(!generators.is_empty() && generators.iter().all(|&g| g > 0));
        let gcd = generators.iter().fold(0u64, |a, &g| a.gcd(&g));
        let len = (max / gcd) as usize + 1;
        let mut counts = vec![BigUint::zero(); len];
        counts[0] = BigUint::one();
        // One generator at a time, rolling over the same table.
        for &g in generators {
            let step = (g / gcd) as usize;
            for v in step..len {
                let (lo, hi) = counts.split_at_mut(v);
                hi[0] += &lo[v - step];
            }
        }
        DenumerantTable { gcd, max, counts }
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    /// `|Z(n)|`; zero for negative `n` and for `n` not divisible by the gcd.
    ///
    /// Panics if `n` exceeds the table's range.
    pub fn get(&self, n: i64) -> BigUint {
        if n < 0 || !(n as u64).is_multiple_of(self.gcd) {
            return BigUint::zero();
        }
        assert!(
            n as u64 <= self.max,
            "n = {n} beyond table bound {}",
            self.max
        );
        self.counts[(n as u64 / self.gcd) as usize].clone()
    }

    pub fn get_ref(&self, n: u64) -> Option<&BigUint> {
        if !n.is_multiple_of(self.gcd) || n > self.max {
            None
        } else {
            Some(&self.counts[(n / self.gcd) as usize])
        }
    }
}

/// `|Z_S(n)|` without enumerating factorizations.
pub fn count_factorizations(s: &NumericalSemigroup, n: i64) -> BigUint {
    if n < 0 || !s.contains(n) {
        return BigUint::zero();
    }
    DenumerantTable::new(s.generators(), n as u64).get(n)
}

/// `|Z_I(n)|`: tuples indexed by `I` over the generators `{n_i : i in I}`.
pub fn count_factorizations_subset(
    s: &NumericalSemigroup,
    subset: Mask,
    n: i64,
) -> Result<BigUint, SemigroupError> {
    let gens = s.subset_generators(subset)?;
    if n < 0 {
        return Ok(BigUint::zero());
    }
    Ok(DenumerantTable::new(&gens, n as u64).get(n))
}

/// Denumerant tables for every nonempty subset of the generators, shared by
/// batch evaluations of the support-graph edge formula.
#[derive(Debug, Clone)]
pub struct SubsetTables {
    k: usize,
    tables: Vec<Option<DenumerantTable>>,
}

impl SubsetTables {
    pub fn new(s: &NumericalSemigroup, max: u64) -> Self {
        let k = s.k();
        let tables = (0..=crate::mask::full(k))
            .map(|m| {
                (m != 0).then(|| {
                    DenumerantTable::new(&s.subset_generators(m).expect("valid mask"), max)
                })
            })
            .collect();
        SubsetTables { k, tables }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn table(&self, subset: Mask) -> &DenumerantTable {
        self.tables[subset as usize]
            .as_ref()
            .expect("nonempty subset")
    }

    pub fn count(&self, subset: Mask, n: i64) -> BigUint {
        self.table(subset).get(n)
    }
}
