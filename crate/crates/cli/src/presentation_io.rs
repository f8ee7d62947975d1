//! Presentation files: `{"generators": [...], "trades": [{"left": [...], "right": [...]}]}`.

use std::path::Path;

use factgraph_core::{
    GraphError, NumericalSemigroup, Presentation, SemigroupError, Trade, TradeError,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TradeEntry {
    left: Vec<u64>,
    right: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationFile {
    generators: Vec<u64>,
    trades: Vec<TradeEntry>,
}

#[derive(Debug, Error)]
pub enum PresentationIoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("parse error in trades[{index}]: {source}")]
    Trade { index: usize, source: TradeError },
    #[error(
        "trades[{index}].{field} has {found} entries, the semigroup has {expected} generators"
    )]
    ArityMismatch {
        index: usize,
        field: &'static str,
        found: usize,
        expected: usize,
    },
    #[error("file generators {file:?} differ from the given generators {given:?}")]
    GeneratorMismatch { file: Vec<u64>, given: Vec<u64> },
    #[error("generators: {0}")]
    Semigroup(#[from] SemigroupError),
}

/// Parses a presentation file. Trades are normalized; duplicates and
/// reorientations end up in [`Presentation::warnings`].
pub fn parse_presentation(
    text: &str,
    given: Option<&NumericalSemigroup>,
) -> Result<(NumericalSemigroup, Presentation), PresentationIoError> {
    let file: PresentationFile =
        serde_json::from_str(text).map_err(|e| PresentationIoError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    let s = NumericalSemigroup::new(&file.generators)?;
    if let Some(g) = given {
        if g.generators() != s.generators() {
            return Err(PresentationIoError::GeneratorMismatch {
                file: file.generators,
                given: g.generators().to_vec(),
            });
        }
    }
    for (index, t) in file.trades.iter().enumerate() {
        for (field, side) in [("left", &t.left), ("right", &t.right)] {
            if side.len() != s.k() {
                return Err(PresentationIoError::ArityMismatch {
                    index,
                    field,
                    found: side.len(),
                    expected: s.k(),
                });
            }
        }
        Trade::normalize(&s, t.left.clone(), t.right.clone())
            .map_err(|source| PresentationIoError::Trade { index, source })?;
    }
    let rho = Presentation::from_trades(&s, file.trades.into_iter().map(|t| (t.left, t.right)))
        .map_err(|e| match e {
            GraphError::Trade(source) => PresentationIoError::Trade { index: 0, source },
            other => unreachable!("trades were validated: {other}"),
        })?;
    Ok((s, rho))
}

pub fn read_presentation(
    path: &Path,
    given: Option<&NumericalSemigroup>,
) -> Result<(NumericalSemigroup, Presentation), PresentationIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| PresentationIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_presentation(&text, given)
}

pub fn render_presentation(s: &NumericalSemigroup, rho: &Presentation) -> String {
    let file = PresentationFile {
        generators: s.generators().to_vec(),
        trades: rho
            .trades()
            .iter()
            .map(|t| TradeEntry {
                left: t.left().to_vec(),
                right: t.right().to_vec(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("plain data");
    text.push('\n');
    text
}

pub fn write_presentation(
    path: &Path,
    s: &NumericalSemigroup,
    rho: &Presentation,
) -> Result<(), PresentationIoError> {
    std::fs::write(path, render_presentation(s, rho)).map_err(|source| PresentationIoError::Io {
        path: path.display().to_string(),
        source,
    })
}
