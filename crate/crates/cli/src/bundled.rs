//! The bundled verification run behind `verify-claims` without generators.

use std::time::Instant;

use factgraph_core::geometry::{principal_ideal_cube_iso, DEFAULT_GEOMETRY_CAP};
use factgraph_core::graphs::{
    betti_scan_bound, compare_support_counts, compare_trade_counts, presentation_failure,
    verify_edge_reconstruction,
};
use factgraph_core::{
    betti_elements, enumerate_pds, factorizations, minimal_presentation, mobius_closed_form,
    projective_complex_check, support_graph, trade_graph, verify_degree_period_claims,
    zonotope_iso, NumericalSemigroup, OracleRoute, Presentation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const SEMIGROUPS: [&[u64]; 6] = [
    &[6, 9, 20],
    &[8, 11, 12],
    &[6, 10, 15],
    &[3, 5, 7],
    &[4, 6],
    &[5, 7, 9, 11],
];

#[derive(Debug, Clone, Serialize)]
pub struct BundledCheck {
    pub group: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn sg(gens: &[u64]) -> NumericalSemigroup {
    NumericalSemigroup::new(gens).expect("bundled generators are minimal")
}

fn reference_rho(s: &NumericalSemigroup, extra: bool) -> Presentation {
    let mut trades = vec![
        (vec![3, 0, 0], vec![0, 2, 0]),
        (vec![4, 4, 0], vec![0, 0, 3]),
    ];
    if extra {
        trades.push((vec![7, 2, 0], vec![0, 0, 3]));
    }
    Presentation::from_trades(s, trades).expect("balanced trades")
}

struct Recorder {
    checks: Vec<BundledCheck>,
}

impl Recorder {
    fn run(&mut self, group: u8, name: &str, f: impl FnOnce() -> (bool, String)) {
        let t = Instant::now();
        let (passed, detail) = f();
        self.checks.push(BundledCheck {
            group,
            name: name.to_string(),
            passed,
            detail,
            seconds: t.elapsed().as_secs_f64(),
        });
    }

    /// One entry per claim check; each carries the time of the whole run.
    fn claims(&mut self, s: &NumericalSemigroup, route: OracleRoute) {
        let t = Instant::now();
        let rho = minimal_presentation(s).unwrap();
        let report = verify_degree_period_claims(s, &rho, None, route).unwrap();
        let seconds = t.elapsed().as_secs_f64();
        let route = match route {
            OracleRoute::Enumeration => "enumeration",
            OracleRoute::Closed => "closed forms",
        };
        for c in report.checks {
            let group = if c.name.starts_with("count") {
                3
            } else if c.name.starts_with("support") {
                4
            } else {
                5
            };
            self.checks.push(BundledCheck {
                group,
                name: format!("{s} via {route}, {}", c.name),
                passed: c.passed,
                detail: c.detail,
                seconds,
            });
        }
    }
}

fn mismatch_detail(n: usize, first: Option<String>) -> String {
    match first {
        None => "no mismatches".into(),
        Some(f) => format!("{n} mismatches, first {f}"),
    }
}

pub fn run_all(parallel: bool) -> Vec<BundledCheck> {
    let mut r = Recorder { checks: Vec::new() };
    let s6920 = sg(&[6, 9, 20]);

    r.run(1, "factorizations of 18 in <6, 9, 20>", || {
        let z: Vec<String> = factorizations(&s6920, 18)
            .iter()
            .map(|f| f.to_string())
            .collect();
        (z == ["(0,2,0)", "(3,0,0)"], z.join(" "))
    });
    r.run(1, "support graph of 44 in <8, 11, 12> has one edge", || {
        let e = support_graph(&sg(&[8, 11, 12]), 44).unwrap().edge_count();
        (e == 1, format!("{e} edges"))
    });
    r.run(1, "Betti elements and minimal presentation sizes", || {
        let b = betti_elements(&s6920).unwrap();
        let s2 = sg(&[6, 10, 15]);
        let b2 = betti_elements(&s2).unwrap();
        let r2 = minimal_presentation(&s2).unwrap().len();
        (
            b == [18, 60] && b2 == [30] && r2 == 2,
            format!("{b:?}, {b2:?} with {r2} trades"),
        )
    });
    r.run(1, "trade graphs of 78 with rho and rho'", || {
        let a = trade_graph(&s6920, &reference_rho(&s6920, false), 78)
            .unwrap()
            .edge_count();
        let b = trade_graph(&s6920, &reference_rho(&s6920, true), 78)
            .unwrap()
            .edge_count();
        (a == 7 && b == 9, format!("{a} and {b} edges"))
    });

    for gens in SEMIGROUPS {
        let s = sg(gens);
        r.run(
            2,
            &format!("edge formulas vs enumeration on {s}, n <= 400"),
            || {
                let rho = minimal_presentation(&s).unwrap();
                let sup = compare_support_counts(&s, 400, parallel).unwrap();
                let tra = compare_trade_counts(&s, &rho, 400, parallel).unwrap();
                let first = sup.first().or(tra.first()).map(|m| format!("n={}", m.n));
                (
                    sup.is_empty() && tra.is_empty(),
                    mismatch_detail(sup.len() + tra.len(), first),
                )
            },
        );
    }

    let mut runs = vec![(s6920.clone(), OracleRoute::Enumeration)];
    runs.extend(SEMIGROUPS.iter().map(|g| (sg(g), OracleRoute::Closed)));
    for (s, route) in runs {
        r.claims(&s, route);
    }

    r.run(
        6,
        "recursive Mobius function matches closed form, k <= 7",
        || {
            for k in 2..=7 {
                let pds = enumerate_pds(k, false).unwrap();
                for y in 1..pds.len() {
                    let rec = pds.mobius_recursive(0, y).unwrap();
                    let closed = mobius_closed_form(k, pds.elements()[y].pair().unwrap()).unwrap();
                    if rec != closed {
                        return (false, format!("k={k} {}", pds.elements()[y].label()));
                    }
                }
            }
            (true, "k = 2..7".into())
        },
    );
    r.run(6, "dual Mobius inversion", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 2..=5 {
            let pds = enumerate_pds(k, false).unwrap();
            for trial in 0..100 {
                let f: Vec<i64> = (0..pds.len()).map(|_| rng.gen_range(-10..=10)).collect();
                if !pds.verify_dual_mobius_inversion(&f) {
                    return (false, format!("k={k} trial {trial}"));
                }
            }
        }
        (true, "100 functions per poset, k = 2..5".into())
    });

    r.run(7, "zonotope and projective complex, k <= 8", || {
        for k in 2..=DEFAULT_GEOMETRY_CAP {
            let z = zonotope_iso(k).unwrap();
            let p = projective_complex_check(k, DEFAULT_GEOMETRY_CAP).unwrap();
            let (o, u) = principal_ideal_cube_iso(k, k - 1, k).unwrap();
            if !(z.passed() && p.covering_passed() && o.holds() && u.holds()) {
                return (false, format!("k={k}"));
            }
        }
        let z = zonotope_iso(4).unwrap();
        let p = projective_complex_check(4, DEFAULT_GEOMETRY_CAP).unwrap();
        let ok = z.face_counts == [14, 24, 12] && p.cells == [7, 12, 6] && p.euler == 1;
        (
            ok,
            format!(
                "k=4: faces {:?}, cells {:?}, chi {}",
                z.face_counts, p.cells, p.euler
            ),
        )
    });

    r.run(8, "edge reconstruction is a bijection", || {
        for gens in SEMIGROUPS {
            let s = sg(gens);
            let rho = minimal_presentation(&s).unwrap();
            for n in 0..=200 {
                if let Err(e) = verify_edge_reconstruction(&s, &rho, n).unwrap() {
                    return (false, format!("{s} n={n}: {e}"));
                }
            }
        }
        (true, "n <= 200 on every bundled semigroup".into())
    });
    r.run(8, "dropping a trade of rho breaks connectivity", || {
        let rho = reference_rho(&s6920, false);
        let bound = betti_scan_bound(&s6920);
        let w: Vec<Option<u64>> = (0..rho.len())
            .map(|i| presentation_failure(&s6920, &rho.without(i), bound).unwrap())
            .collect();
        (w == [Some(18), Some(60)], format!("witnesses {w:?}"))
    });
    r.checks
}
