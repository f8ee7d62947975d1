//! Exact quasipolynomials: fitting, evaluation, and period reduction.
//!
//! A quasipolynomial of degree `d` and period `p` is stored as one
//! polynomial in `n` per residue `r = n mod p`. Fitting samples an oracle on
//! each residue class, interpolates exactly over the rationals, and then
//! validates on held-out points; there is no tolerance anywhere.

mod claims;
mod io;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::semigroup::NumericalSemigroup;

pub use claims::{
    counting_oracle, default_fit_start, verify_degree_period_claims, ClaimCheck, ClaimReport,
    ClaimSummary, Oracle, OracleRoute,
};
pub use io::{read_samples_csv, write_samples_csv, QuasipolynomialExport};

/// Held-out points checked per residue after interpolation.
pub const HELD_OUT: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error(
        "fit failed on residue {residue}: oracle gives {expected} at n = {n}, fit gives {fitted}"
    )]
    FitFailure {
        residue: u64,
        n: u64,
        expected: String,
        fitted: String,
    },
    #[error("no sample for n = {0}")]
    MissingSample(u64),
    #[error("leading coefficient vanishes on every residue at degree {0}")]
    ZeroLeading(usize),
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("trade-edge prediction needs at least one trade")]
    NoTrades,
    #[error("malformed input: {0}")]
    Parse(String),
}

/// `n |-> a_d(n) n^d + ... + a_0(n)` with `a_i` of period `p`, asserted for
/// `n >= valid_from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quasipolynomial {
    period: u64,
    degree: usize,
    /// `coeffs[r][i]` is `a_i` on residue `r`.
    coeffs: Vec<Vec<BigRational>>,
    valid_from: u64,
}

impl Quasipolynomial {
    pub fn new(
        period: u64,
        degree: usize,
        coeffs: Vec<Vec<BigRational>>,
        valid_from: u64,
    ) -> Result<Self, FitError> {
        if period == 0 {
            return Err(FitError::ZeroPeriod);
        }
        if coeffs.len() as u64 != period || coeffs.iter().any(|c| c.len() != degree + 1) {
            return Err(FitError::Parse(format!(
                "expected {period} residues of {} coefficients",
                degree + 1
            )));
        }
        if coeffs.iter().all(|c| c[degree].is_zero()) {
            return Err(FitError::ZeroLeading(degree));
        }
        Ok(Quasipolynomial {
            period,
            degree,
            coeffs,
            valid_from,
        })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn valid_from(&self) -> u64 {
        self.valid_from
    }

    /// `(a_0(r), ..., a_d(r))`.
    pub fn coefficients(&self, residue: u64) -> &[BigRational] {
        &self.coeffs[(residue % self.period) as usize]
    }

    pub fn leading(&self, residue: u64) -> &BigRational {
        &self.coefficients(residue)[self.degree]
    }

    /// Evaluates the polynomial of the residue class of `n` (Horner).
    pub fn eval(&self, n: u64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(n));
        self.coefficients(n)
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * &x + a)
    }

    /// Smallest divisor `p'` of the period for which the coefficient table is
    /// `p'`-periodic, with the table refolded to that period.
    pub fn minimal_period(&self) -> (u64, Quasipolynomial) {
        let p = self.period;
        let mut divisors: Vec<u64> = (1..=p).filter(|d| p.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        for d in divisors {
            let periodic = (0..p as usize).all(|r| self.coeffs[r] == self.coeffs[r % d as usize]);
            if periodic {
                let folded = Quasipolynomial {
                    period: d,
                    degree: self.degree,
                    coeffs: self.coeffs[..d as usize].to_vec(),
                    valid_from: self.valid_from,
                };
                return (d, folded);
            }
        }
        unreachable!("p itself is a period")
    }
}

/// Free-function form of [`Quasipolynomial::minimal_period`].
pub fn minimal_period(q: &Quasipolynomial) -> (u64, Quasipolynomial) {
    q.minimal_period()
}

/// Newton interpolation through `(x_i, y_i)`, returned as monomial
/// coefficients `c_0, ..., c_m`.
pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    assert_eq!(xs.len(), ys.len());
    let m = xs.len();
    let mut table = ys.to_vec();
    let mut newton = Vec::with_capacity(m);
    newton.push(table[0].clone());
    for level in 1..m {
        for i in 0..m - level {
            table[i] = (&table[i + 1] - &table[i]) / (&xs[i + level] - &xs[i]);
        }
        newton.push(table[0].clone());
    }
    // Expand c_m, then poly * (x - x_j) + c_j for j = m-1 .. 0.
    let mut poly = vec![newton[m - 1].clone()];
    for j in (0..m - 1).rev() {
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * &xs[j];
        }
        next[0] += &newton[j];
        poly = next;
    }
    poly
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rational_from_count(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

/// First `n >= start` in residue class `r` modulo `period`.
fn first_in_class(start: u64, period: u64, r: u64) -> u64 {
    start + (r + period - start % period) % period
}

/// Fits a quasipolynomial of the given period and degree to `oracle`.
///
/// For each residue `r`, the oracle is sampled at the first `degree + 1`
/// values `n >= start` with `n = r mod period`, the interpolant is computed
/// exactly, and [`HELD_OUT`] further points of the class must agree.
pub fn fit<F>(
    oracle: F,
    period: u64,
    degree: usize,
    start: u64,
) -> Result<Quasipolynomial, FitError>
where
    F: Fn(u64) -> BigRational + Sync,
{
    try_fit(|n| Some(oracle(n)), period, degree, start)
}

/// As [`fit`], for oracles that may lack values (e.g. sampled sequences).
pub fn try_fit<F>(
    oracle: F,
    period: u64,
    degree: usize,
    start: u64,
) -> Result<Quasipolynomial, FitError>
where
    F: Fn(u64) -> Option<BigRational> + Sync,
{
    if period == 0 {
        return Err(FitError::ZeroPeriod);
    }
    let coeffs: Result<Vec<Vec<BigRational>>, FitError> = (0..period)
        .into_par_iter()
        .map(|r| {
            let first = first_in_class(start, period, r);
            let points: Vec<u64> = (0..(degree + 1 + HELD_OUT) as u64)
                .map(|j| first + j * period)
                .collect();
            let values = points
                .iter()
                .map(|&n| oracle(n).ok_or(FitError::MissingSample(n)))
                .collect::<Result<Vec<_>, _>>()?;
            let xs: Vec<BigRational> = points[..=degree].iter().map(|&n| rat(n)).collect();
            let poly = interpolate(&xs, &values[..=degree]);
            for (&n, expected) in points.iter().zip(&values).skip(degree + 1) {
                let x = rat(n);
                let got = poly
                    .iter()
                    .rev()
                    .fold(BigRational::zero(), |acc, a| acc * &x + a);
                if &got != expected {
                    return Err(FitError::FitFailure {
                        residue: r,
                        n,
                        expected: fmt_rational(expected),
                        fitted: fmt_rational(&got),
                    });
                }
            }
            Ok(poly)
        })
        .collect();
    Quasipolynomial::new(period, degree, coeffs?, start)
}

/// `p/q` with `q > 0`, including `/1` for integers.
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational, FitError> {
    let s = s.trim();
    let bad = || FitError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Which counting function a prediction refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountKind {
    /// `|Z_S(n)|`.
    Count,
    /// `|E(nabla_S(n))|`.
    SupportEdges,
    /// `|E(T_{S, rho}(n))|`.
    TradeEdges,
}

impl CountKind {
    pub fn degree(&self, k: usize) -> usize {
        match self {
            CountKind::Count | CountKind::TradeEdges => k - 1,
            CountKind::SupportEdges => 2 * k - 2,
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Leading coefficient predicted for residues divisible by the gcd `c`:
/// `c / ((k-1)! prod n_i)` for factorization counts,
/// `c^2 / (2 ((k-1)!)^2 prod n_i^2)` for support-graph edges, and
/// `c r / ((k-1)! prod n_i)` for trade-graph edges with `r` trades.
pub fn predicted_leading_coefficient(
    s: &NumericalSemigroup,
    which: CountKind,
    trades: usize,
) -> Result<BigRational, FitError> {
    let c = BigInt::from(s.gcd());
    let prod = s
        .generators()
        .iter()
        .fold(BigInt::one(), |acc, &g| acc * BigInt::from(g));
    let base = BigRational::new(c, factorial(s.k() - 1) * prod);
    Ok(match which {
        CountKind::Count => base,
        CountKind::SupportEdges => &base * &base / BigRational::from_integer(BigInt::from(2)),
        CountKind::TradeEdges => {
            if trades == 0 {
                return Err(FitError::NoTrades);
            }
            base * BigRational::from_integer(BigInt::from(trades))
        }
    })
}

/// Residues mod `period` on which the counting functions may be nonzero.
pub fn divisible_residues(period: u64, c: u64) -> impl Iterator<Item = u64> {
    debug_assert!(period.is_multiple_of(c));
    (0..period).filter(move |r| r % c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denumerant::DenumerantTable;
    use crate::factorization::factorizations;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn sg(gens: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::new(gens).unwrap()
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        // 1/2 x^2 - 3x + 7
        let f = |x: i64| q(x * x, 2) - q(3 * x, 1) + q(7, 1);
        let xs: Vec<_> = [2, 5, 11].iter().map(|&x| q(x, 1)).collect();
        let ys: Vec<_> = [2, 5, 11].iter().map(|&x| f(x)).collect();
        assert_eq!(interpolate(&xs, &ys), vec![q(7, 1), q(-3, 1), q(1, 2)]);
    }

    #[test]
    fn constant_fit() {
        let qp = fit(|_| q(5, 1), 1, 0, 0).unwrap();
        assert_eq!(qp.coefficients(0), &[q(5, 1)]);
        let qp = fit(|_| q(5, 1), 180, 0, 3).unwrap();
        assert_eq!(qp.minimal_period().0, 1);
    }

    #[test]
    fn count_fit_6_9_20() {
        let s = sg(&[6, 9, 20]);
        let table = DenumerantTable::new(s.generators(), 181 + 180 * 7);
        let oracle = |n: u64| rational_from_count(&table.get(n as i64));
        let qp = fit(oracle, 180, 2, 181).unwrap();
        for r in 0..180 {
            assert_eq!(qp.leading(r), &q(1, 2160), "residue {r}");
        }
        assert_eq!(
            predicted_leading_coefficient(&s, CountKind::Count, 0).unwrap(),
            q(1, 2160)
        );
        assert!(matches!(
            fit(oracle, 180, 1, 181),
            Err(FitError::FitFailure { .. })
        ));
    }

    #[test]
    fn predictions() {
        let s = sg(&[6, 9, 20]);
        assert_eq!(
            predicted_leading_coefficient(&s, CountKind::TradeEdges, 2).unwrap(),
            q(1, 1080)
        );
        assert_eq!(
            predicted_leading_coefficient(&s, CountKind::SupportEdges, 0).unwrap(),
            q(1, 9_331_200)
        );
        assert_eq!(
            predicted_leading_coefficient(&sg(&[4, 6]), CountKind::Count, 0).unwrap(),
            q(1, 12)
        );
        assert_eq!(
            predicted_leading_coefficient(&sg(&[6, 10, 15]), CountKind::TradeEdges, 2).unwrap(),
            q(1, 900)
        );
        assert_eq!(
            predicted_leading_coefficient(&s, CountKind::TradeEdges, 0),
            Err(FitError::NoTrades)
        );
    }

    #[test]
    fn non_coprime_period() {
        let s = sg(&[4, 6]);
        let oracle = |n: u64| rat(factorizations(&s, n).len() as u64);
        let qp = fit(oracle, 12, 1, 28).unwrap();
        let (p, folded) = qp.minimal_period();
        assert_eq!(12 % p, 0);
        assert_eq!(p % 2, 0);
        for r in (1..12).step_by(2) {
            assert!(qp.coefficients(r).iter().all(|a| a.is_zero()));
        }
        for r in (0..12).step_by(2) {
            assert_eq!(qp.leading(r), &q(1, 12));
        }
        for n in 28..228 {
            assert_eq!(folded.eval(n), qp.eval(n));
        }
    }

    #[test]
    fn two_three_minimal_period() {
        let s = sg(&[2, 3]);
        let oracle = |n: u64| rat(factorizations(&s, n).len() as u64);
        let qp = fit(oracle, 6, 1, 0).unwrap();
        let (p, folded) = qp.minimal_period();
        // |Z(n)| = floor(n/6) + 1 except n = 1 mod 6, so the coefficient table
        // cannot repeat with a proper divisor of 6.
        assert_eq!(p, 6);
        for n in 0..=60 {
            assert_eq!(folded.eval(n), oracle(n), "n={n}");
        }
    }

    #[test]
    fn missing_samples_reported() {
        let err = try_fit(|n| (n < 8).then(|| q(1, 1)), 2, 1, 0).unwrap_err();
        assert!(matches!(err, FitError::MissingSample(n) if n >= 8));
    }

    #[test]
    fn zero_leading_rejected() {
        assert_eq!(fit(rat, 1, 2, 0), Err(FitError::ZeroLeading(2)));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(fmt_rational(&q(1, 2160)), "1/2160");
        assert_eq!(fmt_rational(&q(5, 1)), "5/1");
        assert_eq!(parse_rational(" -3/6 ").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    proptest! {
        #[test]
        fn refold_agrees(a in -20i64..20, b in -20i64..20, c in 1i64..20, m in 1u64..5) {
            // Period-m perturbation of a quadratic, fitted at period 3m.
            let f = |n: u64| {
                let n = n as i64;
                q(c * n * n, 7) + q(a * ((n % m as i64) + 1), 1) + q(b, 3)
            };
            let qp = fit(f, 3 * m, 2, 5).unwrap();
            let (p, folded) = qp.minimal_period();
            prop_assert_eq!((3 * m) % p, 0);
            prop_assert_eq!(m % p, 0);
            for n in 5..205 {
                prop_assert_eq!(folded.eval(n), qp.eval(n));
            }
        }
    }
}
