//! `exceptional`: exact computations with exceptional collections from the command line.
//!
//! Every command prints one JSON document on standard output. Errors go to
//! standard error as `{"error": {...}}` with exit status 1 for bad input and 2
//! for well-formed input outside the domain of the operation.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use exceptional::{Direction, ErrorKind};
use serde_json::json;

#[derive(Parser)]
#[command(name = "exceptional", version, about = "Exceptional collections on blow-ups of the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    surface: String,
    #[arg(long)]
    e: String,
    #[arg(long)]
    f: String,
}

#[derive(Args)]
struct DescentArgs {
    #[arg(long)]
    collection: String,
    /// Comma-separated multiplicities, one per member; all 1 when omitted.
    #[arg(long)]
    mults: Option<String>,
    /// Writes the mutation log here as JSON lines.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Euler form chi(E, F).
    Chi(PairArgs),
    /// Slopes of a class of positive rank.
    Slope {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        e: String,
        /// Ample class as a coefficient array; defaults to (4; 1, ..., 1).
        #[arg(long)]
        ample: Option<String>,
    },
    /// Type of a numerically exceptional pair.
    ClassifyPair(PairArgs),
    /// All roots of the surface.
    Roots {
        #[arg(long)]
        surface: String,
    },
    /// One mutation of the pair at a 1-based position.
    Mutate {
        #[arg(long)]
        collection: String,
        #[arg(long)]
        pos: usize,
        #[arg(long, value_parser = parse_direction)]
        dir: Direction,
    },
    /// Applies a braid word such as "L1 R2", or a random word of `--length` letters.
    Braid {
        #[arg(long)]
        collection: String,
        #[arg(long, conflicts_with = "length")]
        word: Option<String>,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Helix members in an index range and the periodicity check.
    Helix {
        #[arg(long)]
        collection: String,
        #[arg(long)]
        lo: Option<i64>,
        #[arg(long)]
        hi: Option<i64>,
    },
    /// Gram matrix of the Euler form.
    Gram {
        #[arg(long)]
        collection: String,
    },
    /// Numerical exceptionality with the first violating entry.
    Check {
        #[arg(long)]
        collection: String,
    },
    /// Harder-Narasimhan coarsening of a graded object.
    Hn {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        graded: String,
        #[arg(long)]
        ample: Option<String>,
    },
    /// Markov triples up to a bound, or the ranks reached by a braid word on the plane.
    Markov {
        #[arg(long, required_unless_present = "braid")]
        limit: Option<u64>,
        #[arg(long, conflicts_with = "limit")]
        braid: Option<String>,
    },
    /// Two-sided orbit of an ext-pair.
    Orbit {
        #[command(flatten)]
        pair: PairArgs,
        /// Number of steps in each direction.
        #[arg(long, default_value_t = 5)]
        limit: usize,
    },
    /// Normal form of a collection before peeling.
    Normalize(DescentArgs),
    /// Removes the O_e(-1) layer from a normalized collection.
    Peel {
        #[arg(long)]
        collection: String,
        #[arg(long)]
        mults: Option<String>,
        /// Exceptional curve to peel; defaults to the last one.
        #[arg(long)]
        e_index: Option<usize>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Full descent to the blow-down along the last exceptional curve.
    Descend(DescentArgs),
    /// Re-executes a JSON-lines mutation log.
    Replay {
        #[arg(long)]
        log: String,
    },
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    s.parse().map_err(|e: exceptional::Error| e.to_string())
}

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<exceptional::Error> for Failure {
    fn from(e: exceptional::Error) -> Failure {
        let code = match e.kind() {
            ErrorKind::InvalidInput => 1,
            ErrorKind::Domain => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(doc) => {
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let kind = if f.code == 1 { "invalid_input" } else { "domain" };
            eprintln!("{}", json!({"error": {"kind": kind, "message": f.message}}));
            ExitCode::from(f.code)
        }
    }
}
