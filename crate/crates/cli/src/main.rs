mod bundled;
mod commands;
mod presentation_io;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "factgraph",
    version,
    about = "Factorization graphs of numerical semigroups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Run batch scans on all cores.
    #[arg(long, global = true)]
    pub parallel: bool,
}

#[derive(Args, Debug)]
pub struct Generators {
    /// Minimal generators of the semigroup.
    #[arg(required = true, value_name = "GENERATOR")]
    pub generators: Vec<u64>,
}

/// A single `--n` or an inclusive range `--from .. --to`.
#[derive(Args, Debug)]
pub struct Span {
    #[arg(long, conflicts_with_all = ["from", "to"], required_unless_present = "to")]
    pub n: Option<u64>,
    #[arg(long, requires = "to")]
    pub from: Option<u64>,
    #[arg(long)]
    pub to: Option<u64>,
}

impl Span {
    pub fn range(&self) -> (u64, u64) {
        match self.n {
            Some(n) => (n, n),
            None => (self.from.unwrap_or(0), self.to.unwrap()),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Support,
    Trade,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Formula,
    Brute,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Counted {
    Count,
    SupportEdges,
    TradeEdges,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Closed,
    Enumeration,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the factorizations of n.
    Factorizations {
        #[command(flatten)]
        gens: Generators,
        #[arg(long)]
        n: u64,
    },
    /// Number of factorizations of n (or of every n in a range).
    Count {
        #[command(flatten)]
        gens: Generators,
        #[command(flatten)]
        span: Span,
        /// CSV rows `n,count`.
        #[arg(long)]
        csv: bool,
    },
    /// Support graph of n.
    SupportGraph {
        #[command(flatten)]
        gens: Generators,
        #[arg(long)]
        n: u64,
        /// Graphviz output.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// Trade graph of n for a presentation (minimal by default).
    TradeGraph {
        #[command(flatten)]
        gens: Generators,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// Betti elements.
    Betti {
        #[command(flatten)]
        gens: Generators,
    },
    /// A minimal presentation, optionally written to a presentation file.
    MinimalPresentation {
        #[command(flatten)]
        gens: Generators,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge counts from the closed formulas, by enumeration, or both.
    EdgeCount {
        #[command(flatten)]
        gens: Generators,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_enum, default_value = "both")]
        mode: Mode,
        #[command(flatten)]
        span: Span,
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
    /// Fit a quasipolynomial to a counting function or to sampled values.
    Fit {
        /// Generators; omit when fitting `--samples`.
        #[arg(value_name = "GENERATOR", required_unless_present = "samples")]
        generators: Vec<u64>,
        #[arg(long, value_enum, default_value = "count")]
        which: Counted,
        #[arg(long)]
        period: Option<u64>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        start: Option<u64>,
        /// CSV file with columns `n,value`.
        #[arg(long, conflicts_with = "generators", requires_all = ["period", "degree"])]
        samples: Option<PathBuf>,
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "closed")]
        route: Route,
        /// Refold to the minimal period before printing.
        #[arg(long)]
        minimal: bool,
    },
    /// Degree, period and leading-coefficient claims; without generators,
    /// the full bundled verification.
    VerifyClaims {
        #[arg(value_name = "GENERATOR")]
        generators: Vec<u64>,
        #[arg(long)]
        start: Option<u64>,
        #[arg(long, value_enum, default_value = "closed")]
        route: Route,
        /// Check this presentation instead of a minimal one.
        #[arg(long)]
        presentation: Option<PathBuf>,
        /// Scan bound for the presentation check (at least the connectivity bound).
        #[arg(long)]
        bound: Option<u64>,
    },
    /// The poset of disjoint supports.
    Poset {
        #[arg(long)]
        k: usize,
        /// Ordered pairs instead of unordered.
        #[arg(long)]
        ordered: bool,
    },
    /// The cubical complex of unordered supports and its covering checks.
    Complex {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = factgraph_core::geometry::DEFAULT_GEOMETRY_CAP)]
        cap: usize,
        /// OFF file of the k = 4 zonotope.
        #[arg(long, conflicts_with = "json")]
        off: bool,
    },
    /// The zonotope face-lattice isomorphism.
    Zonotope {
        #[arg(long)]
        k: usize,
    },
}

/// Exit statuses: 0 success, 1 failed verification, 2 bad input.
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = commands::run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Verification(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
