use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

use output::{Failure, Output};

#[derive(Parser, Debug)]
#[command(name = "lrcw", version, about = "Bounds, constructions and checks for locally repairable codes")]
struct Cli {
    /// Write the payload here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a run manifest (command, inputs, version, seed, sha256 of the payload).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Tuple {
    pub n: i64,
    pub k: i64,
    pub r: i64,
    pub delta: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every bound for one (n, k, r, δ).
    Bounds {
        #[command(flatten)]
        tuple: Tuple,
        /// Aligned text instead of JSON.
        #[arg(long)]
        table: bool,
        /// Evaluate in 128-bit integers.
        #[arg(long)]
        wide: bool,
    },
    /// Build a construction and report its parameters.
    #[command(subcommand)]
    Build(BuildKind),
    /// Parameters, lattice and locality of an atom configuration (JSON file).
    Analyze {
        config: PathBuf,
        /// Exhaustive rank-axiom and Z-axiom checks.
        #[arg(long)]
        verify_axioms: bool,
        /// Write the lattice as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Subset-sweep cap for matroid operations.
        #[arg(long, env = "LRCW_SWEEP_CAP", default_value_t = lrc_core::matroid::DEFAULT_SWEEP_CAP)]
        sweep_cap: usize,
    },
    /// Largest distance over the configuration search space.
    Search {
        #[command(flatten)]
        tuple: Tuple,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// CSV of bounds (and optionally search outcomes) over a parameter range.
    Grid {
        /// Inclusive range `A..B`, or a single value.
        #[arg(long, value_parser = parse_range)]
        n: (i64, i64),
        #[arg(long, value_parser = parse_range)]
        k: Option<(i64, i64)>,
        #[arg(long, value_parser = parse_range)]
        r: Option<(i64, i64)>,
        #[arg(long, value_parser = parse_range)]
        delta: Option<(i64, i64)>,
        /// Add search columns for tuples within the search cap.
        #[arg(long)]
        search: bool,
        #[command(flatten)]
        limits: SearchArgs,
        /// Worker threads, 0 for one per core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Compare a linear code with its matroid on distance and locality.
    OracleCode {
        /// Generator matrix: JSON (`{"q":..,"generator":..}` or rows) or whitespace text.
        #[arg(long, conflicts_with = "random")]
        generator: Option<PathBuf>,
        /// Field size; required for text or bare-row input.
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        delta: usize,
        /// Check this many random generators instead of a file.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 5)]
        max_k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BuildKind {
    /// Perfect configuration for ⌈k/r⌉ = 2.
    Perfect {
        #[command(flatten)]
        tuple: Tuple,
    },
    /// Materialize a graph spec (JSON file).
    Graph {
        spec: PathBuf,
        /// Write the graph as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Graph instance realizing the two-branch lower bound.
    Theorem42 {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SearchArgs {
    /// Arbitrary overlap patterns (n ≤ 8, at most 4 atoms) instead of a single pool.
    #[arg(long)]
    pub general: bool,
    /// Accept min η ≥ δ−1 and max ρ ≤ r.
    #[arg(long)]
    pub relaxed: bool,
    #[arg(long, env = "LRCW_SEARCH_CAP", default_value_t = lrc_core::oracle::search::SEARCH_CAP)]
    pub max_n: usize,
    #[arg(long)]
    pub max_configs: Option<usize>,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

fn run(cli: &Cli) -> Result<(Output, Option<u64>), Failure> {
    let out = match &cli.command {
        Command::Bounds { tuple, table, wide } => commands::bounds(*tuple, *table, *wide)?,
        Command::Build(BuildKind::Perfect { tuple }) => commands::build_perfect(*tuple)?,
        Command::Build(BuildKind::Graph { spec, dot }) => commands::build_graph(spec, dot.as_deref())?,
        Command::Build(BuildKind::Theorem42 { tuple, dot }) => commands::build_theorem42(*tuple, dot.as_deref())?,
        Command::Analyze { config, verify_axioms, dot, sweep_cap } => {
            commands::analyze(config, *verify_axioms, dot.as_deref(), *sweep_cap)?
        }
        Command::Search { tuple, search } => commands::search(*tuple, *search)?,
        Command::Grid { n, k, r, delta, search, limits, workers } => {
            let ranges = commands::GridRanges { n: *n, k: *k, r: *r, delta: *delta };
            commands::grid(ranges, search.then_some(*limits), *workers)?
        }
        Command::OracleCode { generator, q, r, delta, random, seed, max_n, max_k } => {
            if let Some(count) = random {
                let opts = commands::RandomCodes { count: *count, seed: *seed, q: *q, max_n: *max_n, max_k: *max_k };
                return Ok((commands::oracle_random(opts, *r, *delta)?, Some(*seed)));
            }
            let Some(path) = generator else {
                return Err(Failure::Usage("oracle-code needs --generator or --random".into()));
            };
            commands::oracle_file(path, *q, *r, *delta)?
        }
    };
    Ok((out, None))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(out, seed)| output::emit(&out, cli.out.as_deref(), cli.manifest.as_deref(), seed));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
