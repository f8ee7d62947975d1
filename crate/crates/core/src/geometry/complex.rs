use std::collections::HashMap;
use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::zonotope::{face_dimension, signed_covectors};
use super::{all_ideals_are_cubes, check_arity, GeometryError, Sign, SignVector};
use crate::poset::{enumerate_pds, Element, PosetDS};

/// Largest `k` for which pairwise cell intersections are checked.
pub const INTERSECTION_CHECK_MAX: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectiveReport {
    pub k: usize,
    /// Cells of the unordered complex by dimension `0..=k-2`.
    pub cells: Vec<usize>,
    pub euler: i64,
    pub projective_euler: i64,
    /// Every unordered cell has exactly two preimages of the same dimension.
    pub two_to_one: bool,
    /// The quotient map restricts to a bijection on every closed cell.
    pub locally_bijective: bool,
    pub ideals_are_cubes: bool,
    /// Ordered complex: every two cells meet in a cell or not at all.
    /// `None` above [`INTERSECTION_CHECK_MAX`].
    pub ordered_intersections_principal: Option<bool>,
    /// Unordered complex: cell pairs whose intersection is not a single cell.
    pub unordered_intersection_failures: Option<usize>,
    pub unordered_intersection_example: Option<String>,
}

impl ProjectiveReport {
    /// The covering and counting checks; intersections are reported apart
    /// because the unordered complex is not closed under them for `k >= 4`.
    pub fn covering_passed(&self) -> bool {
        self.two_to_one
            && self.locally_bijective
            && self.ideals_are_cubes
            && self.euler == self.projective_euler
            && self.ordered_intersections_principal != Some(false)
    }

    pub fn intersections_passed(&self) -> bool {
        self.unordered_intersection_failures.unwrap_or(0) == 0
            && self.ordered_intersections_principal != Some(false)
    }
}

fn cells_by_dimension(pds: &PosetDS) -> Vec<usize> {
    let k = pds.k();
    let mut out = vec![0; k - 1];
    for i in 1..pds.len() {
        out[pds.height(i).unwrap()] += 1;
    }
    out
}

fn euler(cells: &[usize]) -> i64 {
    cells
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Maximal cells of `cl(x) n cl(y)`; the intersection is a single cell (or
/// empty) iff there is at most one.
fn intersection_maxima(pds: &PosetDS, x: usize, y: usize) -> Vec<usize> {
    let common: Vec<usize> = (1..pds.len())
        .filter(|&z| pds.leq(z, x) && pds.leq(z, y))
        .collect();
    common
        .iter()
        .copied()
        .filter(|&z| !common.iter().any(|&w| w != z && pds.leq(z, w)))
        .collect()
}

/// Pairs of cells `x < y` whose intersection is not a single cell, with the
/// first such pair (in index order).
fn intersection_failures(pds: &PosetDS) -> (usize, Option<(usize, usize, Vec<usize>)>) {
    let n = pds.len();
    let bad: Vec<(usize, usize, Vec<usize>)> = (1..n)
        .into_par_iter()
        .flat_map_iter(|x| {
            (x + 1..n).filter_map(move |y| {
                let m = intersection_maxima(pds, x, y);
                (m.len() > 1).then_some((x, y, m))
            })
        })
        .collect();
    (bad.len(), bad.into_iter().next())
}

/// Covering and counting checks relating the ordered poset (boundary of a
/// zonotope, a `(k-2)`-sphere) to the unordered one.
pub fn projective_complex_check(k: usize, cap: usize) -> Result<ProjectiveReport, GeometryError> {
    check_arity(k, cap)?;
    let ordered = enumerate_pds(k, true)?;
    let unordered = enumerate_pds(k, false)?;

    let mut preimages: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut quotient = vec![0usize; ordered.len()];
    for (i, e) in ordered.elements().iter().enumerate().skip(1) {
        let p = e.pair().unwrap();
        let q = unordered.index_of(&p.unordered()).unwrap();
        quotient[i] = q;
        preimages.entry(q).or_default().push(i);
    }
    let two_to_one = preimages.len() == unordered.len() - 1
        && preimages.iter().all(|(&q, v)| {
            v.len() == 2 && v.iter().all(|&i| ordered.height(i) == unordered.height(q))
        });
    let locally_bijective = (1..ordered.len()).into_par_iter().all(|i| {
        let below: Vec<usize> = ordered.ideal(i).into_iter().filter(|&z| z != 0).collect();
        let mut images: Vec<usize> = below.iter().map(|&z| quotient[z]).collect();
        images.sort_unstable();
        images.dedup();
        let target: Vec<usize> = unordered
            .ideal(quotient[i])
            .into_iter()
            .filter(|&z| z != 0)
            .collect();
        images.len() == below.len() && images == target
    });

    let cells = cells_by_dimension(&unordered);
    let (mut ordered_ok, mut failures, mut example) = (None, None, None);
    if k <= INTERSECTION_CHECK_MAX {
        ordered_ok = Some(intersection_failures(&ordered).0 == 0);
        let (count, first) = intersection_failures(&unordered);
        failures = Some(count);
        example = first.map(|(x, y, m)| {
            let label = |i: usize| unordered.elements()[i].label();
            let meet: Vec<String> = m.into_iter().map(label).collect();
            format!(
                "{} and {} meet in {}",
                label(x),
                label(y),
                meet.join(" and ")
            )
        });
    }
    Ok(ProjectiveReport {
        k,
        euler: euler(&cells),
        cells,
        projective_euler: if k.is_multiple_of(2) { 1 } else { 0 },
        two_to_one,
        locally_bijective,
        ideals_are_cubes: all_ideals_are_cubes(k)?,
        ordered_intersections_principal: ordered_ok,
        unordered_intersection_failures: failures,
        unordered_intersection_example: example,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellExport {
    pub label: String,
    pub dimension: usize,
    /// Labels of the codimension-one faces.
    pub boundary: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexExport {
    pub k: usize,
    pub ordered: bool,
    /// `cells[d]` lists the `d`-dimensional cells.
    pub cells: Vec<Vec<CellExport>>,
}

/// The cubical complex of a support poset, cells grouped by dimension.
pub fn complex_export(pds: &PosetDS) -> ComplexExport {
    let k = pds.k();
    let mut cells: Vec<Vec<CellExport>> = vec![Vec::new(); k - 1];
    let mut boundary: HashMap<usize, Vec<String>> = HashMap::new();
    for (a, b) in pds.covers() {
        if a != 0 {
            boundary
                .entry(b)
                .or_default()
                .push(pds.elements()[a].label());
        }
    }
    for (i, e) in pds.elements().iter().enumerate() {
        if let Element::Pair(p) = e {
            let d = p.height(k);
            cells[d].push(CellExport {
                label: p.label(),
                dimension: d,
                boundary: boundary.remove(&i).unwrap_or_default(),
            });
        }
    }
    ComplexExport {
        k,
        ordered: pds.is_ordered(),
        cells,
    }
}

/// OFF text for the zonotope of `(I_3 | 1)` in `R^3`. Vertices are
/// `sum_j u_j v_j` over topes `u` (integer coordinates); each facet is a
/// parallelogram listed as a 4-cycle.
pub fn zonotope_off() -> String {
    const K: usize = 4;
    let covectors = signed_covectors(K);
    let topes: Vec<&SignVector> = covectors
        .iter()
        .filter(|u| face_dimension(u) == 0 && !u.is_zero())
        .collect();
    let index: HashMap<&SignVector, usize> = topes.iter().copied().zip(0..).collect();
    let facets: Vec<&SignVector> = covectors
        .iter()
        .filter(|u| !u.is_zero() && face_dimension(u) == K - 2)
        .collect();

    let mut out = String::from("OFF\n");
    writeln!(
        out,
        "{} {} {}",
        topes.len(),
        facets.len(),
        topes.len() + facets.len() - 2
    )
    .unwrap();
    for u in &topes {
        let last = u.0[K - 1].as_i64();
        let coords: Vec<String> = (0..K - 1)
            .map(|i| (u.0[i].as_i64() + last).to_string())
            .collect();
        writeln!(out, "{}", coords.join(" ")).unwrap();
    }
    let cycle = [
        (Sign::Plus, Sign::Plus),
        (Sign::Plus, Sign::Minus),
        (Sign::Minus, Sign::Minus),
        (Sign::Minus, Sign::Plus),
    ];
    for w in facets {
        let zeros: Vec<usize> = (0..K).filter(|&i| w.0[i] == Sign::Zero).collect();
        let ids: Vec<String> = cycle
            .iter()
            .map(|&(a, b)| {
                let mut t = w.clone();
                t.0[zeros[0]] = a;
                t.0[zeros[1]] = b;
                index[&t].to_string()
            })
            .collect();
        writeln!(out, "4 {}", ids.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DEFAULT_GEOMETRY_CAP;

    #[test]
    fn small_complexes() {
        let r = projective_complex_check(4, DEFAULT_GEOMETRY_CAP).unwrap();
        assert_eq!(r.cells, vec![7, 12, 6]);
        assert_eq!(r.euler, 1);
        assert!(r.covering_passed(), "{r:?}");
        let r = projective_complex_check(3, DEFAULT_GEOMETRY_CAP).unwrap();
        assert_eq!((r.cells.clone(), r.euler), (vec![3, 3], 0));
        assert!(r.covering_passed() && r.intersections_passed());
        let r = projective_complex_check(2, DEFAULT_GEOMETRY_CAP).unwrap();
        assert_eq!((r.cells.clone(), r.euler), (vec![1], 1));
        assert!(r.covering_passed() && r.intersections_passed());
    }

    #[test]
    fn euler_matches_projective_space() {
        for k in 2..=7 {
            let r = projective_complex_check(k, DEFAULT_GEOMETRY_CAP).unwrap();
            assert!(r.covering_passed(), "k={k}: {r:?}");
        }
    }

    #[test]
    fn unordered_intersections_split_from_four() {
        // The squares {1,2} and {3,4} of the k = 4 complex share exactly the
        // two vertices {13,24} and {14,23}.
        let pds = enumerate_pds(4, false).unwrap();
        let x = pds.find(0b0001, 0b0010).unwrap();
        let y = pds.find(0b0100, 0b1000).unwrap();
        let mut meet: Vec<String> = intersection_maxima(&pds, x, y)
            .into_iter()
            .map(|i| pds.elements()[i].label())
            .collect();
        meet.sort();
        assert_eq!(meet, ["{13,24}", "{14,23}"]);

        let r = projective_complex_check(4, DEFAULT_GEOMETRY_CAP).unwrap();
        assert_eq!(r.ordered_intersections_principal, Some(true));
        assert!(r.unordered_intersection_failures.unwrap() > 0);
        assert!(!r.intersections_passed());
    }

    #[test]
    fn export_shapes() {
        let pds = enumerate_pds(3, false).unwrap();
        let e = complex_export(&pds);
        assert_eq!(e.cells[0].len(), 3);
        assert_eq!(e.cells[1].len(), 3);
        assert!(e.cells[1].iter().all(|c| c.boundary.len() == 2));
        assert!(e.cells[0].iter().all(|c| c.boundary.is_empty()));
        let json = serde_json::to_string(&e).unwrap();
        assert!(json.contains("\"label\":\"{1,2}\""));
    }

    #[test]
    fn off_counts() {
        let off = zonotope_off();
        let mut lines = off.lines();
        assert_eq!(lines.next(), Some("OFF"));
        assert_eq!(lines.next(), Some("14 12 24"));
        // V - E + F = 2
        assert_eq!(off.lines().filter(|l| l.starts_with("4 ")).count(), 12);
    }
}
