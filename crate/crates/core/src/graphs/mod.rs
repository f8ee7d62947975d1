//! Factorization support graphs and trade graphs.
//!
//! Both graphs have vertex set `Z_S(n)`, listed in increasing lexicographic
//! order. The support graph joins factorizations whose supports meet; the
//! trade graph joins factorizations whose direct trade lies in a given
//! presentation.

mod export;
mod formula;
mod presentation;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factorization::{
    direct_trade_coords, factorizations, for_each_factorization, support, Factorization, TradeError,
};
use crate::semigroup::NumericalSemigroup;

pub use export::{to_dot, GraphExport};
pub use formula::{
    compare_support_counts, compare_trade_counts, edge_count_support_closed,
    edge_count_trade_closed, support_edge_count_brute, support_edge_count_by_class,
    trade_edge_count_brute, CountMismatch, SupportEdgeFormula, TradeEdgeFormula,
};
pub use presentation::{
    betti_elements, betti_scan_bound, is_presentation, minimal_presentation, presentation_failure,
    Presentation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("factorization graphs need at least two generators, got {0}")]
    ArityTooSmall(usize),
    #[error("presentation has trades of length {found}, semigroup has {expected} generators")]
    TradeArityMismatch { expected: usize, found: usize },
    #[error("scan bound {given} is below the connectivity bound {needed}")]
    BoundTooSmall { given: u64, needed: u64 },
    #[error(transparent)]
    Trade(#[from] TradeError),
}

pub(crate) fn require_arity(s: &NumericalSemigroup) -> Result<(), GraphError> {
    if s.k() < 2 {
        Err(GraphError::ArityTooSmall(s.k()))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    SupportGraph,
    TradeGraph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationGraph {
    kind: GraphKind,
    n: u64,
    vertices: Vec<Factorization>,
    edges: Vec<(usize, usize)>,
    /// For trade graphs, the index in the presentation of each edge's trade.
    edge_trades: Vec<usize>,
}

impl FactorizationGraph {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn vertices(&self) -> &[Factorization] {
        &self.vertices
    }

    /// Sorted pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_trades(&self) -> &[usize] {
        &self.edge_trades
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() <= 1
    }
}

/// `nabla_S(n)`.
pub fn support_graph(s: &NumericalSemigroup, n: u64) -> Result<FactorizationGraph, GraphError> {
    require_arity(s)?;
    let vertices = factorizations(s, n);
    let supports: Vec<_> = vertices.iter().map(|v| v.support()).collect();
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if supports[i] & supports[j] != 0 {
                edges.push((i, j));
            }
        }
    }
    Ok(FactorizationGraph {
        kind: GraphKind::SupportGraph,
        n,
        vertices,
        edges,
        edge_trades: Vec::new(),
    })
}

pub(crate) fn check_presentation_arity(
    s: &NumericalSemigroup,
    rho: &Presentation,
) -> Result<(), GraphError> {
    match rho.trades().iter().find(|t| t.k() != s.k()) {
        Some(t) => Err(GraphError::TradeArityMismatch {
            expected: s.k(),
            found: t.k(),
        }),
        None => Ok(()),
    }
}

/// `T_{S, rho}(n)`: an edge wherever the direct trade between two
/// factorizations, canonically oriented, is one of the trades of `rho`.
pub fn trade_graph(
    s: &NumericalSemigroup,
    rho: &Presentation,
    n: u64,
) -> Result<FactorizationGraph, GraphError> {
    check_presentation_arity(s, rho)?;
    let lookup: HashMap<(&[u64], &[u64]), usize> = rho
        .trades()
        .iter()
        .enumerate()
        .map(|(i, t)| ((t.left(), t.right()), i))
        .collect();
    let vertices = factorizations(s, n);
    let mut edges = Vec::new();
    let mut edge_trades = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let (l, r) = direct_trade_coords(vertices[i].coords(), vertices[j].coords());
            if let Some(&t) = lookup.get(&(&l[..], &r[..])) {
                edges.push((i, j));
                edge_trades.push(t);
            }
        }
    }
    Ok(FactorizationGraph {
        kind: GraphKind::TradeGraph,
        n,
        vertices,
        edges,
        edge_trades,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Classes ordered by least member, members ascending.
    fn classes(mut self, n: usize) -> Vec<Vec<usize>> {
        let mut slot: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            let r = self.find(v);
            let idx = *slot.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[idx].push(v);
        }
        out
    }
}

/// Components of a graph, ordered by least vertex index.
pub fn connected_components(g: &FactorizationGraph) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.vertices.len());
    for &(a, b) in &g.edges {
        uf.union(a, b);
    }
    uf.classes(g.vertices.len())
}

/// Components of `nabla_S(n)` without materializing its edges: all
/// factorizations using generator `i` form a clique, so it suffices to
/// link each factorization to its support.
pub(crate) fn support_components(s: &NumericalSemigroup, n: u64) -> Vec<Vec<Vec<u64>>> {
    let mut vertices: Vec<Vec<u64>> = Vec::new();
    for_each_factorization(s, n, |c| vertices.push(c.to_vec()));
    let k = s.k();
    let mut uf = UnionFind::new(vertices.len() + k);
    for (v, coords) in vertices.iter().enumerate() {
        for i in crate::mask::indices(support(coords)) {
            uf.union(v, vertices.len() + i);
        }
    }
    let nv = vertices.len();
    let classes = uf.classes(nv + k);
    classes
        .into_iter()
        .filter(|c| c[0] < nv)
        .map(|c| {
            c.into_iter()
                .filter(|&v| v < nv)
                .map(|v| vertices[v].clone())
                .collect()
        })
        .collect()
}

/// Checks the bijection between trade-graph edges and pairs `(i, u)` with
/// `u` in `Z(n - beta_i)`: every edge `{z, z'}` must arise from exactly one
/// such pair through `{u + t_i, u + t'_i}`, and distinct pairs must give
/// distinct edges. Returns a description of the first violation.
pub fn verify_edge_reconstruction(
    s: &NumericalSemigroup,
    rho: &Presentation,
    n: u64,
) -> Result<Result<(), String>, GraphError> {
    let g = trade_graph(s, rho, n)?;
    let index: HashMap<&[u64], usize> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.coords(), i))
        .collect();

    let mut from_edges: HashMap<(usize, Vec<u64>), (usize, usize)> = HashMap::new();
    for (&(a, b), &t) in g.edges.iter().zip(&g.edge_trades) {
        let u = g.vertices[a].gcd(&g.vertices[b]);
        let beta = rho.trades()[t].betti_value();
        if s.evaluate(&u) != Some(n - beta) {
            return Ok(Err(format!("edge ({a},{b}) has gcd outside Z(n - {beta})")));
        }
        if from_edges.insert((t, u), (a, b)).is_some() {
            return Ok(Err(format!("edge ({a},{b}) shares its (trade, gcd) label")));
        }
    }

    let mut image = Vec::new();
    for (i, t) in rho.trades().iter().enumerate() {
        if t.betti_value() > n {
            continue;
        }
        for u in factorizations(s, n - t.betti_value()) {
            let lift = |side: &[u64]| -> Vec<u64> {
                u.coords().iter().zip(side).map(|(a, b)| a + b).collect()
            };
            let (za, zb) = (lift(t.left()), lift(t.right()));
            let (Some(&a), Some(&b)) = (index.get(&za[..]), index.get(&zb[..])) else {
                return Ok(Err(format!("lift of trade {i} leaves Z({n})")));
            };
            image.push((a.min(b), a.max(b)));
        }
    }
    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != image.len() {
        return Ok(Err("two (trade, u) pairs produce the same edge".into()));
    }
    if sorted != g.edges {
        return Ok(Err(format!(
            "translated edges ({}) differ from the trade graph ({})",
            sorted.len(),
            g.edges.len()
        )));
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(gens: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::new(gens).unwrap()
    }

    fn reference_rho(s: &NumericalSemigroup, extra: bool) -> Presentation {
        let mut trades = vec![
            (vec![3, 0, 0], vec![0, 2, 0]),
            (vec![4, 4, 0], vec![0, 0, 3]),
        ];
        if extra {
            trades.push((vec![7, 2, 0], vec![0, 0, 3]));
        }
        Presentation::from_trades(s, trades).unwrap()
    }

    fn labels(g: &FactorizationGraph, edge: (usize, usize)) -> (Vec<u64>, Vec<u64>) {
        (
            g.vertices()[edge.0].coords().to_vec(),
            g.vertices()[edge.1].coords().to_vec(),
        )
    }

    #[test]
    fn support_graph_of_44() {
        let g = support_graph(&sg(&[8, 11, 12]), 44).unwrap();
        assert_eq!(g.vertices().len(), 3);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(labels(&g, g.edges()[0]), (vec![1, 0, 3], vec![4, 0, 1]));
        let comps = connected_components(&g);
        assert_eq!(comps, vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn support_graph_edges() {
        let s = sg(&[6, 9, 20]);
        let g0 = support_graph(&s, 0).unwrap();
        assert_eq!((g0.vertices().len(), g0.edge_count()), (1, 0));
        assert_eq!(connected_components(&g0).len(), 1);

        let g = support_graph(&s, 78).unwrap();
        assert_eq!(g.vertices().len(), 7);
        assert_eq!(g.edge_count(), 20);
        let mut non_edges = Vec::new();
        for i in 0..7 {
            for j in i + 1..7 {
                if !g.edges().contains(&(i, j)) {
                    non_edges.push(labels(&g, (i, j)));
                }
            }
        }
        non_edges.sort();
        // (1,8,0) and (3,0,3) share generator 1; only one pair is disjoint.
        assert_eq!(non_edges, vec![(vec![0, 2, 3], vec![13, 0, 0])]);
        assert_eq!(
            connected_components(&support_graph(&s, 18).unwrap()).len(),
            2
        );
        assert!(support_graph(&s, 43).unwrap().vertices().is_empty());
        assert_eq!(
            support_graph(&sg(&[7]), 14).unwrap_err(),
            GraphError::ArityTooSmall(1)
        );
    }

    #[test]
    fn trade_graphs_of_78() {
        let s = sg(&[6, 9, 20]);
        let rho = reference_rho(&s, false);
        let g = trade_graph(&s, &rho, 78).unwrap();
        assert_eq!(g.edge_count(), 7);
        assert!(g.is_connected());
        let g2 = trade_graph(&s, &reference_rho(&s, true), 78).unwrap();
        assert_eq!(g2.edge_count(), 9);
        // the two extra edges are the diagonals (10,2,0)-(3,0,3) and (7,4,0)-(0,2,3)
        let extra: Vec<_> = g2
            .edges()
            .iter()
            .zip(g2.edge_trades())
            .filter(|(_, &t)| t == 2)
            .map(|(&e, _)| labels(&g2, e))
            .collect();
        assert_eq!(
            extra,
            vec![
                (vec![0, 2, 3], vec![7, 4, 0]),
                (vec![3, 0, 3], vec![10, 2, 0])
            ]
        );

        let g18 = trade_graph(&s, &rho, 18).unwrap();
        assert_eq!(g18.edge_count(), 1);
        assert_eq!(labels(&g18, g18.edges()[0]), (vec![0, 2, 0], vec![3, 0, 0]));
    }

    #[test]
    fn trade_arity_mismatch() {
        let s = sg(&[6, 9, 20]);
        let rho = reference_rho(&s, false);
        let err = trade_graph(&sg(&[2, 3]), &rho, 12).unwrap_err();
        assert_eq!(
            err,
            GraphError::TradeArityMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn support_components_agree_with_graph() {
        for gens in [[6u64, 9, 20], [8, 11, 12], [6, 10, 15]] {
            let s = sg(&gens);
            for n in 0..=200 {
                let g = support_graph(&s, n).unwrap();
                let expected: Vec<Vec<Vec<u64>>> = connected_components(&g)
                    .into_iter()
                    .map(|c| {
                        c.into_iter()
                            .map(|v| g.vertices()[v].coords().to_vec())
                            .collect()
                    })
                    .collect();
                assert_eq!(support_components(&s, n), expected, "{s} n={n}");
            }
        }
    }

    #[test]
    fn reconstruction_bijection() {
        let s = sg(&[6, 9, 20]);
        for rho in [
            reference_rho(&s, false),
            reference_rho(&s, true),
            minimal_presentation(&s).unwrap(),
        ] {
            for n in 0..=300 {
                assert_eq!(
                    verify_edge_reconstruction(&s, &rho, n).unwrap(),
                    Ok(()),
                    "n={n}"
                );
            }
        }
    }

    #[test]
    fn trade_edges_in_support_graph_iff_common_part() {
        let s = sg(&[6, 9, 20]);
        let rho = reference_rho(&s, true);
        for n in [78u64, 120, 138, 200] {
            let t = trade_graph(&s, &rho, n).unwrap();
            let nabla = support_graph(&s, n).unwrap();
            for &(a, b) in t.edges() {
                let u = t.vertices()[a].gcd(&t.vertices()[b]);
                let shared = u.iter().any(|&x| x > 0);
                assert_eq!(nabla.edges().contains(&(a, b)), shared);
            }
        }
    }
}
