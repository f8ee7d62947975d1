//! Numerical semigroups given by their minimal generating sets.

use num_integer::Integer;
use thiserror::Error;

use crate::factorization::{self, Factorization};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("no generators given")]
    EmptyInput,
    #[error("generators must be positive")]
    NonPositiveGenerator,
    #[error("generator {generator} is redundant: {}", format_witness(.witness))]
    NonMinimalGenerators {
        generator: u64,
        /// `(generator, multiplicity)` pairs over the smaller generators.
        witness: Vec<(u64, u64)>,
    },
    #[error("lcm of the generators does not fit in 64 bits")]
    LcmOverflow,
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("subset mask {mask:#b} has indices outside [1, {k}]")]
    SubsetOutOfRange { mask: u64, k: usize },
    #[error("embedding dimension {0} exceeds the supported maximum")]
    TooManyGenerators(usize),
}

fn format_witness(witness: &[(u64, u64)]) -> String {
    witness
        .iter()
        .map(|(g, m)| format!("{m}*{g}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Membership oracle for the semigroup generated by an arbitrary list of
/// positive integers, via the table of least elements in each residue class
/// modulo the smallest reduced generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperySet {
    gcd: u64,
    modulus: u64,
    least: Vec<u64>,
}

impl AperySet {
    pub fn new(generators: &[u64]) -> Self {
        assert!(!generators.is_empty() && generators.iter().all(|&g| g > 0));
        let gcd = generators.iter().fold(0u64, |acc, &g| acc.gcd(&g));
        let reduced: Vec<u64> = generators.iter().map(|g| g / gcd).collect();
        let modulus = *reduced.iter().min().unwrap();
        let m = modulus as usize;
        let mut least = vec![u64::MAX; m];
        least[0] = 0;
        // Round-robin relaxation until no residue improves.
        loop {
            let mut changed = false;
            for r in 0..m {
                let base = least[r];
                if base == u64::MAX {
                    continue;
                }
                for &g in &reduced {
                    let target = (r + (g % modulus) as usize) % m;
                    let cand = base + g;
                    if cand < least[target] {
                        least[target] = cand;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        debug_assert!(least.iter().all(|&w| w != u64::MAX));
        AperySet {
            gcd,
            modulus,
            least,
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        if n < 0 {
            return false;
        }
        self.contains_u64(n as u64)
    }

    #[inline]
    pub fn contains_u64(&self, n: u64) -> bool {
        if !n.is_multiple_of(self.gcd) {
            return false;
        }
        let n = n / self.gcd;
        n >= self.least[(n % self.modulus) as usize]
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    /// Frobenius number of the reduced semigroup; `-1` when it is all of `Z>=0`.
    pub fn frobenius_reduced(&self) -> i64 {
        *self.least.iter().max().unwrap() as i64 - self.modulus as i64
    }
}

/// `S = <n_1, ..., n_k>` with `n_1 < ... < n_k` minimal generators.
///
/// Generators need not be coprime. All Frobenius-type data refers to the
/// reduced semigroup `<n_1/c, ..., n_k/c>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    gcd: u64,
    lcm: u64,
    reduced: Vec<u64>,
    membership: AperySet,
    /// `suffix[i]` decides membership in `<n_{i+1}, ..., n_k>`.
    suffix: Vec<AperySet>,
}

impl NumericalSemigroup {
    pub fn new(gens: &[u64]) -> Result<Self, SemigroupError> {
        if gens.is_empty() {
            return Err(SemigroupError::EmptyInput);
        }
        if gens.contains(&0) {
            return Err(SemigroupError::NonPositiveGenerator);
        }
        let mut generators = gens.to_vec();
        generators.sort_unstable();
        generators.dedup();
        if generators.len() > crate::mask::MAX_ARITY {
            return Err(SemigroupError::TooManyGenerators(generators.len()));
        }

        for i in 1..generators.len() {
            let smaller = &generators[..i];
            let apery = AperySet::new(smaller);
            if apery.contains_u64(generators[i]) {
                let suffix = suffix_tables(smaller);
                let mut witness = None;
                factorization::descend(smaller, &suffix, generators[i], &mut |coords| {
                    witness = Some(coords.to_vec());
                    false
                });
                let witness = witness
                    .expect("membership implies a factorization")
                    .into_iter()
                    .zip(smaller)
                    .filter(|(m, _)| *m > 0)
                    .map(|(m, &g)| (g, m))
                    .collect();
                return Err(SemigroupError::NonMinimalGenerators {
                    generator: generators[i],
                    witness,
                });
            }
        }

        let gcd = generators.iter().fold(0u64, |acc, &g| acc.gcd(&g));
        let mut lcm = 1u64;
        for &g in &generators {
            let step = g / lcm.gcd(&g);
            lcm = lcm.checked_mul(step).ok_or(SemigroupError::LcmOverflow)?;
        }
        let reduced = generators.iter().map(|g| g / gcd).collect();
        let membership = AperySet::new(&generators);
        let suffix = suffix_tables(&generators);
        Ok(NumericalSemigroup {
            generators,
            gcd,
            lcm,
            reduced,
            membership,
            suffix,
        })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Embedding dimension `k`.
    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    pub fn reduced_generators(&self) -> &[u64] {
        &self.reduced
    }

    pub fn frobenius_reduced(&self) -> i64 {
        self.membership.frobenius_reduced()
    }

    /// The reduced (coprime) semigroup `<n_1/c, ..., n_k/c>`.
    pub fn reduced(&self) -> NumericalSemigroup {
        NumericalSemigroup::new(&self.reduced).expect("reduced generators stay minimal")
    }

    pub fn contains(&self, n: i64) -> bool {
        self.membership.contains(n)
    }

    pub(crate) fn suffix_tables(&self) -> &[AperySet] {
        &self.suffix
    }

    /// `phi(z) = sum z_i n_i`, or `None` on overflow or arity mismatch.
    pub fn evaluate(&self, coords: &[u64]) -> Option<u64> {
        if coords.len() != self.k() {
            return None;
        }
        coords
            .iter()
            .zip(&self.generators)
            .try_fold(0u64, |acc, (&z, &g)| acc.checked_add(z.checked_mul(g)?))
    }

    pub fn factorization(&self, coords: Vec<u64>) -> Option<Factorization> {
        let value = self.evaluate(&coords)?;
        Some(Factorization::from_parts(coords, value))
    }

    /// Generators indexed by a 1-based subset mask.
    pub fn subset_generators(&self, subset: crate::Mask) -> Result<Vec<u64>, SemigroupError> {
        if subset == 0 {
            return Err(SemigroupError::EmptySubset);
        }
        if subset & !crate::mask::full(self.k()) != 0 {
            return Err(SemigroupError::SubsetOutOfRange {
                mask: subset,
                k: self.k(),
            });
        }
        Ok(crate::mask::indices(subset)
            .map(|i| self.generators[i])
            .collect())
    }
}

impl std::fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

pub(crate) fn suffix_tables(generators: &[u64]) -> Vec<AperySet> {
    (0..generators.len())
        .map(|i| AperySet::new(&generators[i..]))
        .collect()
}
