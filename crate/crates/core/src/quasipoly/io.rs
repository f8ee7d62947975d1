use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{fmt_rational, parse_rational, FitError, Quasipolynomial};

/// JSON form of a [`Quasipolynomial`]; `coefficients[r][i]` is `a_i` on
/// residue `r`, as a `p/q` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasipolynomialExport {
    pub period: u64,
    pub degree: usize,
    pub valid_from: u64,
    pub coefficients: Vec<Vec<String>>,
}

impl From<&Quasipolynomial> for QuasipolynomialExport {
    fn from(q: &Quasipolynomial) -> Self {
        QuasipolynomialExport {
            period: q.period,
            degree: q.degree,
            valid_from: q.valid_from,
            coefficients: q
                .coeffs
                .iter()
                .map(|row| row.iter().map(fmt_rational).collect())
                .collect(),
        }
    }
}

impl TryFrom<&QuasipolynomialExport> for Quasipolynomial {
    type Error = FitError;

    fn try_from(e: &QuasipolynomialExport) -> Result<Self, FitError> {
        let coeffs = e
            .coefficients
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect())
            .collect::<Result<Vec<Vec<BigRational>>, _>>()?;
        Quasipolynomial::new(e.period, e.degree, coeffs, e.valid_from)
    }
}

#[derive(Deserialize)]
struct Row {
    n: u64,
    value: String,
}

/// Reads `n,value` rows (with header) into a sample table.
pub fn read_samples_csv<R: Read>(input: R) -> Result<BTreeMap<u64, BigRational>, FitError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut out = BTreeMap::new();
    for (line, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| FitError::Parse(format!("row {}: {e}", line + 1)))?;
        let value = parse_rational(&row.value)
            .map_err(|e| FitError::Parse(format!("row {}: {e}", line + 1)))?;
        if out.insert(row.n, value).is_some() {
            return Err(FitError::Parse(format!(
                "row {}: duplicate n = {}",
                line + 1,
                row.n
            )));
        }
    }
    Ok(out)
}

pub fn write_samples_csv<W: Write>(
    output: W,
    samples: impl IntoIterator<Item = (u64, BigRational)>,
) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(output);
    writer.write_record(["n", "value"])?;
    for (n, v) in samples {
        writer.write_record([n.to_string(), fmt_rational(&v)])?;
    }
    writer.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasipoly::{fit, try_fit};

    #[test]
    fn json_round_trip() {
        let q = fit(|n| BigRational::new((n * n).into(), 3.into()), 2, 2, 4).unwrap();
        let e = QuasipolynomialExport::from(&q);
        assert_eq!(e.coefficients[0], ["0/1", "0/1", "1/3"]);
        let json = serde_json::to_string(&e).unwrap();
        let back: QuasipolynomialExport = serde_json::from_str(&json).unwrap();
        assert_eq!(Quasipolynomial::try_from(&back).unwrap(), q);
    }

    #[test]
    fn csv_samples_fit() {
        let rows: Vec<(u64, BigRational)> = (0..40)
            .map(|n| (n, BigRational::new((3 * n + 1).into(), 2.into())))
            .collect();
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, rows).unwrap();
        let samples = read_samples_csv(&buf[..]).unwrap();
        assert_eq!(samples.len(), 40);
        let q = try_fit(|n| samples.get(&n).cloned(), 1, 1, 0).unwrap();
        assert_eq!(fmt_rational(q.leading(0)), "3/2");
    }

    #[test]
    fn csv_errors() {
        assert!(read_samples_csv("n,value\n1,2\n1,3\n".as_bytes()).is_err());
        assert!(read_samples_csv("n,value\n1,abc\n".as_bytes()).is_err());
        assert!(read_samples_csv("n,value\n-1,2\n".as_bytes()).is_err());
    }
}
