use std::collections::BTreeMap;
use std::io::Write;

use factgraph_core::geometry::{complex_export, zonotope_off};
use factgraph_core::graphs::{
    betti_scan_bound, presentation_failure, support_edge_count_brute, to_dot,
    trade_edge_count_brute, GraphExport, SupportEdgeFormula, TradeEdgeFormula,
};
use factgraph_core::quasipoly::{
    counting_oracle, default_fit_start, fmt_rational, read_samples_csv, try_fit,
    QuasipolynomialExport, HELD_OUT,
};
use factgraph_core::{
    betti_elements, connected_components, enumerate_pds, factorizations, fit, minimal_presentation,
    projective_complex_check, support_graph, trade_graph, verify_degree_period_claims,
    zonotope_iso, CountKind, DenumerantTable, FactorizationGraph, FitError, NumericalSemigroup,
    OracleRoute, Presentation, Quasipolynomial,
};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::presentation_io::{read_presentation, write_presentation};
use crate::{bundled, Cli, CliError, Command, Counted, Mode, Route, Status, Which};

type Out<'a> = &'a mut dyn Write;

fn semigroup(gens: &[u64]) -> Result<NumericalSemigroup, CliError> {
    NumericalSemigroup::new(gens).map_err(|e| CliError::Usage(e.to_string()))
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn presentation(
    s: &NumericalSemigroup,
    path: Option<&std::path::Path>,
) -> Result<Presentation, CliError> {
    match path {
        None => minimal_presentation(s).map_err(usage),
        Some(p) => {
            let (_, rho) = read_presentation(p, Some(s)).map_err(usage)?;
            for w in rho.warnings() {
                eprintln!("warning: {w}");
            }
            Ok(rho)
        }
    }
}

fn json<T: Serialize>(out: Out, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn run(cli: &Cli, out: Out) -> Result<Status, CliError> {
    match &cli.command {
        Command::Factorizations { gens, n } => {
            let s = semigroup(&gens.generators)?;
            let z = factorizations(&s, *n);
            if cli.json {
                let coords: Vec<&[u64]> = z.iter().map(|f| f.coords()).collect();
                json(out, &coords)?;
            } else {
                for f in &z {
                    writeln!(out, "{f}")?;
                }
            }
        }
        Command::Count { gens, span, csv } => {
            let s = semigroup(&gens.generators)?;
            let (a, b) = span.range();
            let table = DenumerantTable::new(s.generators(), b);
            let rows: Vec<(u64, BigUint)> = (a..=b).map(|n| (n, table.get(n as i64))).collect();
            if cli.json {
                let rows: Vec<_> = rows.iter().map(|(n, c)| (n, c.to_string())).collect();
                json(out, &rows)?;
            } else if *csv {
                writeln!(out, "n,count")?;
                for (n, c) in rows {
                    writeln!(out, "{n},{c}")?;
                }
            } else if span.n.is_some() {
                writeln!(out, "{}", rows[0].1)?;
            } else {
                for (n, c) in rows {
                    writeln!(out, "{n} {c}")?;
                }
            }
        }
        Command::SupportGraph { gens, n, dot } => {
            let s = semigroup(&gens.generators)?;
            let g = support_graph(&s, *n).map_err(usage)?;
            print_graph(cli, out, &g, *dot)?;
        }
        Command::TradeGraph {
            gens,
            n,
            presentation: path,
            dot,
        } => {
            let s = semigroup(&gens.generators)?;
            let rho = presentation(&s, path.as_deref())?;
            let g = trade_graph(&s, &rho, *n).map_err(usage)?;
            print_graph(cli, out, &g, *dot)?;
        }
        Command::Betti { gens } => {
            let s = semigroup(&gens.generators)?;
            let b = betti_elements(&s).map_err(usage)?;
            if cli.json {
                json(out, &b)?;
            } else {
                let b: Vec<String> = b.iter().map(u64::to_string).collect();
                writeln!(out, "{}", b.join(" "))?;
            }
        }
        Command::MinimalPresentation { gens, out: path } => {
            let s = semigroup(&gens.generators)?;
            let rho = minimal_presentation(&s).map_err(usage)?;
            if let Some(p) = path {
                write_presentation(p, &s, &rho).map_err(usage)?;
            }
            if cli.json {
                json(out, &rho.trades())?;
            } else {
                for t in rho.trades() {
                    writeln!(out, "{t}")?;
                }
            }
        }
        Command::EdgeCount {
            gens,
            which,
            mode,
            span,
            presentation: path,
            csv,
        } => return edge_count(cli, out, gens, *which, *mode, span, path, *csv),
        Command::Fit { .. } => return fit_command(cli, out),
        Command::VerifyClaims {
            generators,
            start,
            route,
            presentation: path,
            bound,
        } => {
            if generators.is_empty() {
                return verify_bundled(cli, out);
            }
            let s = semigroup(generators)?;
            let rho = presentation(&s, path.as_deref())?;
            return verify_claims(cli, out, &s, &rho, *start, *route, path.is_some(), *bound);
        }
        Command::Poset { k, ordered } => {
            let pds = enumerate_pds(*k, *ordered).map_err(usage)?;
            if cli.json {
                json(out, &pds.to_export())?;
            } else {
                writeln!(out, "element height mobius")?;
                for i in 1..pds.len() {
                    let mu = pds.mobius_recursive(0, i).map_err(usage)?;
                    let e = pds.element(i).map_err(usage)?;
                    writeln!(out, "{} {} {}", e.label(), pds.height(i).unwrap(), mu)?;
                }
            }
        }
        Command::Complex { k, cap, off } => {
            if *off {
                if *k != 4 {
                    return Err(CliError::Usage("--off is available for k = 4 only".into()));
                }
                write!(out, "{}", zonotope_off())?;
                return Ok(Status::Ok);
            }
            let report = projective_complex_check(*k, *cap).map_err(usage)?;
            if cli.json {
                let pds = enumerate_pds(*k, false).map_err(usage)?;
                #[derive(Serialize)]
                struct Both<'a, R, C> {
                    report: &'a R,
                    complex: C,
                }
                json(
                    out,
                    &Both {
                        report: &report,
                        complex: complex_export(&pds),
                    },
                )?;
            } else {
                let cells: Vec<String> = report.cells.iter().map(usize::to_string).collect();
                writeln!(out, "k {k}")?;
                writeln!(out, "cells {}", cells.join("/"))?;
                writeln!(
                    out,
                    "chi {} (projective space: {})",
                    report.euler, report.projective_euler
                )?;
                writeln!(out, "two-to-one cover {}", yes(report.two_to_one))?;
                writeln!(
                    out,
                    "cover bijective on closed cells {}",
                    yes(report.locally_bijective)
                )?;
                writeln!(
                    out,
                    "closed cells are cubes {}",
                    yes(report.ideals_are_cubes)
                )?;
                match (
                    report.ordered_intersections_principal,
                    report.unordered_intersection_failures,
                ) {
                    (Some(o), Some(u)) => {
                        writeln!(out, "ordered cells meet in single cells {}", yes(o))?;
                        write!(out, "unordered cell pairs meeting in several cells {u}")?;
                        match &report.unordered_intersection_example {
                            Some(e) => writeln!(out, " (e.g. {e})")?,
                            None => writeln!(out)?,
                        }
                    }
                    _ => writeln!(out, "intersections not checked above k = 6")?,
                }
            }
            if !report.covering_passed() {
                return Ok(Status::Failed);
            }
        }
        Command::Zonotope { k } => {
            let r = zonotope_iso(*k).map_err(usage)?;
            if cli.json {
                json(out, &r)?;
            } else {
                let faces: Vec<String> = r.face_counts.iter().map(usize::to_string).collect();
                writeln!(out, "k {k}")?;
                writeln!(out, "faces {}", faces.join("/"))?;
                writeln!(out, "chi {} (sphere: {})", r.euler, r.sphere_euler)?;
                writeln!(out, "nonzero covectors {}", r.covectors)?;
                writeln!(
                    out,
                    "characterization matches oracle {}",
                    yes(r.characterization_matches_oracle)
                )?;
                writeln!(out, "f bijective {}", yes(r.iso.bijective))?;
                writeln!(
                    out,
                    "order preserved both ways {}",
                    yes(r.iso.order_preserving && r.iso.order_reflecting)
                )?;
                writeln!(out, "explicit inverse {}", yes(r.inverse_round_trips))?;
                writeln!(out, "antipodal {}", yes(r.antipodal))?;
                if let Some(f) = &r.iso.failure {
                    writeln!(out, "failure {f}")?;
                }
            }
            if !r.passed() {
                return Ok(Status::Failed);
            }
        }
    }
    Ok(Status::Ok)
}

fn print_graph(cli: &Cli, out: Out, g: &FactorizationGraph, dot: bool) -> Result<(), CliError> {
    if dot {
        write!(out, "{}", to_dot(g))?;
    } else if cli.json {
        json(out, &GraphExport::from(g))?;
    } else {
        writeln!(out, "vertices {}", g.vertices().len())?;
        for (i, v) in g.vertices().iter().enumerate() {
            writeln!(out, "  {i} {v}")?;
        }
        writeln!(out, "edges {}", g.edge_count())?;
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            match g.edge_trades().get(e) {
                Some(t) => writeln!(out, "  {a} -- {b} t{t}")?,
                None => writeln!(out, "  {a} -- {b}")?,
            }
        }
        let comps = connected_components(g);
        let comps: Vec<String> = comps
            .iter()
            .map(|c| {
                let c: Vec<String> = c.iter().map(usize::to_string).collect();
                format!("{{{}}}", c.join(","))
            })
            .collect();
        writeln!(out, "components {}", comps.len())?;
        writeln!(out, "  {}", comps.join(" "))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EdgeRow {
    n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute: Option<u64>,
}

impl EdgeRow {
    fn agrees(&self) -> bool {
        match (&self.formula, self.brute) {
            (Some(f), Some(b)) => *f == b.to_string(),
            _ => true,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn edge_count(
    cli: &Cli,
    out: Out,
    gens: &crate::Generators,
    which: Which,
    mode: Mode,
    span: &crate::Span,
    path: &Option<std::path::PathBuf>,
    csv: bool,
) -> Result<Status, CliError> {
    let s = semigroup(&gens.generators)?;
    let (a, b) = span.range();
    let rho = match which {
        Which::Trade => Some(presentation(&s, path.as_deref())?),
        Which::Support => None,
    };
    let want_formula = mode != Mode::Brute;
    let want_brute = mode != Mode::Formula;
    enum Formula {
        Support(SupportEdgeFormula),
        Trade(TradeEdgeFormula),
    }
    let formula = if want_formula {
        Some(match &rho {
            None => Formula::Support(SupportEdgeFormula::new(&s, b).map_err(usage)?),
            Some(r) => Formula::Trade(TradeEdgeFormula::new(&s, r, b).map_err(usage)?),
        })
    } else {
        None
    };
    if rho.is_none() && formula.is_none() {
        // validate arity before scanning
        support_edge_count_brute(&s, 0).map_err(usage)?;
    }
    let row = |n: u64| -> EdgeRow {
        let f = formula.as_ref().map(|f| match f {
            Formula::Support(f) => f.eval(n).to_string(),
            Formula::Trade(f) => f.eval(n).to_string(),
        });
        let brute = want_brute.then(|| match &rho {
            None => support_edge_count_brute(&s, n).expect("arity checked"),
            Some(r) => trade_edge_count_brute(&s, r, n).expect("arity checked"),
        });
        EdgeRow {
            n,
            formula: f,
            brute,
        }
    };
    let rows: Vec<EdgeRow> = if cli.parallel {
        (a..=b).into_par_iter().map(row).collect()
    } else {
        (a..=b).map(row).collect()
    };
    let witness = rows.iter().find(|r| !r.agrees()).map(|r| r.n);

    if cli.json {
        json(out, &rows)?;
    } else if csv {
        let header: Vec<&str> = ["n"]
            .into_iter()
            .chain(want_formula.then_some("formula"))
            .chain(want_brute.then_some("brute"))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for r in &rows {
            let mut fields = vec![r.n.to_string()];
            fields.extend(r.formula.clone());
            fields.extend(r.brute.map(|b| b.to_string()));
            writeln!(out, "{}", fields.join(","))?;
        }
    } else {
        let single = span.n.is_some();
        for r in &rows {
            let mut fields = Vec::new();
            if !single {
                fields.push(r.n.to_string());
            }
            fields.extend(r.formula.clone());
            fields.extend(r.brute.map(|b| b.to_string()));
            if mode == Mode::Both {
                fields.push(if r.agrees() { "OK" } else { "MISMATCH" }.to_string());
            }
            writeln!(out, "{}", fields.join(" "))?;
        }
    }
    match witness {
        Some(n) => {
            eprintln!("formula and enumeration disagree at n = {n}");
            Ok(Status::Failed)
        }
        None => Ok(Status::Ok),
    }
}

fn fit_command(cli: &Cli, out: Out) -> Result<Status, CliError> {
    let Command::Fit {
        generators,
        which,
        period,
        degree,
        start,
        samples,
        presentation: path,
        route,
        minimal,
    } = &cli.command
    else {
        unreachable!()
    };
    let result = match samples {
        Some(file) => {
            let f = std::fs::File::open(file)?;
            let table = read_samples_csv(f).map_err(usage)?;
            let start = start.or(table.keys().next().copied()).unwrap_or(0);
            try_fit(
                |n| table.get(&n).cloned(),
                period.unwrap(),
                degree.unwrap(),
                start,
            )
        }
        None => {
            let s = semigroup(generators)?;
            let rho = presentation(&s, path.as_deref())?;
            let kind = match which {
                Counted::Count => CountKind::Count,
                Counted::SupportEdges => CountKind::SupportEdges,
                Counted::TradeEdges => CountKind::TradeEdges,
            };
            let period = period.unwrap_or(s.lcm());
            let degree = degree.unwrap_or(kind.degree(s.k()));
            let start = start.unwrap_or_else(|| default_fit_start(&s, &rho));
            let max_n = start + period * (degree + 1 + HELD_OUT) as u64;
            let route = match route {
                Route::Closed => OracleRoute::Closed,
                Route::Enumeration => OracleRoute::Enumeration,
            };
            let oracle = counting_oracle(&s, &rho, kind, route, max_n).map_err(usage)?;
            fit(&oracle, period, degree, start)
        }
    };
    let q = match result {
        Ok(q) => q,
        Err(e @ FitError::FitFailure { .. }) => return Err(CliError::Verification(e.to_string())),
        Err(e) => return Err(usage(e)),
    };
    let (p, folded) = q.minimal_period();
    let shown = if *minimal { &folded } else { &q };
    if cli.json {
        json(out, &QuasipolynomialExport::from(shown))?;
    } else {
        print_quasipolynomial(out, shown, p)?;
    }
    Ok(Status::Ok)
}

fn print_quasipolynomial(out: Out, q: &Quasipolynomial, minimal: u64) -> Result<(), CliError> {
    writeln!(out, "period {}", q.period())?;
    writeln!(out, "minimal period {minimal}")?;
    writeln!(out, "degree {}", q.degree())?;
    writeln!(out, "valid from {}", q.valid_from())?;
    let mut leading: BTreeMap<String, usize> = BTreeMap::new();
    for r in 0..q.period() {
        *leading.entry(fmt_rational(q.leading(r))).or_default() += 1;
    }
    for (value, count) in leading {
        writeln!(out, "leading coefficient {value} on {count} residues")?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify_claims(
    cli: &Cli,
    out: Out,
    s: &NumericalSemigroup,
    rho: &Presentation,
    start: Option<u64>,
    route: Route,
    check_rho: bool,
    bound: Option<u64>,
) -> Result<Status, CliError> {
    let route = match route {
        Route::Closed => OracleRoute::Closed,
        Route::Enumeration => OracleRoute::Enumeration,
    };
    let report = verify_degree_period_claims(s, rho, start, route).map_err(usage)?;
    let witness = if check_rho {
        let bound = bound.unwrap_or_else(|| betti_scan_bound(s));
        Some(presentation_failure(s, rho, bound).map_err(usage)?)
    } else {
        None
    };
    let rho_ok = !matches!(witness, Some(Some(_)));
    if cli.json {
        #[derive(Serialize)]
        struct Full<'a, R> {
            claims: &'a R,
            #[serde(skip_serializing_if = "Option::is_none")]
            presentation_failure: Option<Option<u64>>,
        }
        json(
            out,
            &Full {
                claims: &report,
                presentation_failure: witness,
            },
        )?;
    } else {
        writeln!(out, "{s}, start {}", report.start)?;
        for c in &report.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {} ({})", c.name, c.detail)?;
        }
        for c in &report.summaries {
            let onset = c.onset.map_or("-".to_string(), |o| o.to_string());
            let minimal = c.minimal_period.map_or("-".to_string(), |p| p.to_string());
            writeln!(
                out,
                "{}: degree {}, period {}, minimal period {}, leading {}, fits from n = {}",
                serde_json::to_value(c.kind).unwrap().as_str().unwrap(),
                c.degree,
                c.period,
                minimal,
                c.predicted_leading,
                onset
            )?;
        }
        match witness {
            Some(None) => writeln!(out, "PASS presentation connects every factorization set")?,
            Some(Some(n)) => writeln!(out, "FAIL presentation leaves Z({n}) disconnected")?,
            None => {}
        }
    }
    Ok(if report.passed() && rho_ok {
        Status::Ok
    } else {
        Status::Failed
    })
}

fn verify_bundled(cli: &Cli, out: Out) -> Result<Status, CliError> {
    let checks = bundled::run_all(cli.parallel);
    if cli.json {
        json(out, &checks)?;
    } else {
        for c in &checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{tag} [{}] {}: {} ({:.2} s)",
                c.group, c.name, c.detail, c.seconds
            )?;
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        writeln!(out, "{} checks, {failed} failed", checks.len())?;
    }
    Ok(if checks.iter().all(|c| c.passed) {
        Status::Ok
    } else {
        Status::Failed
    })
}
