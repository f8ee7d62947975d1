use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{FactorizationGraph, GraphKind};

const PALETTE: [&str; 8] = [
    "forestgreen",
    "royalblue",
    "firebrick",
    "darkorange",
    "purple",
    "goldenrod",
    "deeppink",
    "teal",
];

/// JSON mirror of a [`FactorizationGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub kind: GraphKind,
    pub n: u64,
    pub vertices: Vec<Vec<u64>>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edge_trades: Vec<usize>,
}

impl From<&FactorizationGraph> for GraphExport {
    fn from(g: &FactorizationGraph) -> Self {
        GraphExport {
            kind: g.kind,
            n: g.n,
            vertices: g.vertices.iter().map(|v| v.coords().to_vec()).collect(),
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            edge_trades: g.edge_trades.clone(),
        }
    }
}

/// Graphviz rendering. Support-graph edges are solid; trade-graph edges are
/// colored by the index of their trade.
pub fn to_dot(g: &FactorizationGraph) -> String {
    let name = match g.kind {
        GraphKind::SupportGraph => "support",
        GraphKind::TradeGraph => "trade",
    };
    let mut out = String::new();
    writeln!(out, "graph {name}_{} {{", g.n).unwrap();
    for (i, v) in g.vertices.iter().enumerate() {
        writeln!(out, "  v{i} [label=\"{v}\"];").unwrap();
    }
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        match g.kind {
            GraphKind::SupportGraph => writeln!(out, "  v{a} -- v{b};").unwrap(),
            GraphKind::TradeGraph => {
                let t = g.edge_trades[e];
                let color = PALETTE[t % PALETTE.len()];
                writeln!(out, "  v{a} -- v{b} [color={color}, label=\"t{t}\"];").unwrap()
            }
        }
    }
    out.push_str("}\n");
    out
}
