//! The `ffa` command line.
//!
//! Exit codes: 0 completed (any verdict), 1 input error, 2 resource or
//! budget exhaustion, 3 differential mismatch.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::ops::Range;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};

use crate::conway::{format_entry, ConwayCache, ConwayConfig};
use crate::error::{Error, Result};
use crate::ext::FieldSort;
use crate::field::{is_probable_prime, PrimeModulus, DEFAULT_MR_ROUNDS};
use crate::interop::{
    fuzz_corpus, load_corpus, run_diff, DiffItem, DiffOptions, ExternalSolverConfig, FuzzParams,
};
use crate::normalize::{normalize_literal, print_literal};
use crate::smtlib::{literal_coefficients, parse_typed};
use crate::solver::{run_script, SolverConfig, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

pub const DEFAULT_CACHE_FILE: &str = "conway.cache";
const DEFAULT_SEEDS: Range<u64> = 0..100;

#[derive(Debug, Parser)]
#[command(name = "ffa", version, about = "SMT-LIB finite field arithmetic toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Maximum number of assignments (and Conway candidates) to enumerate.
    #[arg(long, global = true, env = "FFA_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Miller-Rabin rounds for field characteristic checks.
    #[arg(long, global = true, env = "FFA_MR_ROUNDS", default_value_t = DEFAULT_MR_ROUNDS,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub mr_rounds: u32,
    /// Conway polynomial cache file [default: ./conway.cache].
    #[arg(long, global = true, env = "FFA_CACHE")]
    pub cache: Option<PathBuf>,
    /// Per-query timeout for external solvers, in seconds.
    #[arg(long, global = true, env = "FFA_TIMEOUT", default_value_t = 10,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub timeout: u64,
    /// Shuffle the solver's enumeration order with this seed.
    #[arg(long, global = true, env = "FFA_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Run an SMT-LIB script (`-` reads standard input).
    Solve { file: String },
    /// Print the Conway polynomial C_{p,n} as `p n c0 … cn`.
    Conway { p: String, n: String },
    /// Print the normalized indexed form of a literal; SORT is `p` or `p:n`.
    #[command(allow_negative_numbers = true)]
    Normalize { sort: String, literal: String },
    /// Probabilistic primality check; exit status 1 when composite.
    Prime { p: String },
    /// Differential testing against external solvers or the naive oracle.
    Diff(DiffArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DiffArgs {
    /// Fuzz seed range `A..B` [default: 0..100 when no corpus is given].
    #[arg(long, value_parser = parse_seed_range)]
    pub seeds: Option<Range<u64>>,
    /// Directory of `.smt2` scripts.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// External solver as `LABEL=CMD`; `{file}` marks the script argument.
    #[arg(long = "solver", value_name = "LABEL=CMD")]
    pub solvers: Vec<String>,
    /// Compare the solver against the naive enumeration oracle.
    #[arg(long)]
    pub internal_only: bool,
    /// Emit one JSON record per line instead of the text report.
    #[arg(long)]
    pub json: bool,
    /// Scripts compared concurrently.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub jobs: u64,
}

fn parse_seed_range(s: &str) -> std::result::Result<Range<u64>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: u64 = a.parse().map_err(|_| format!("bad seed {a:?}"))?;
    let b: u64 = b.parse().map_err(|_| format!("bad seed {b:?}"))?;
    if a > b {
        return Err(format!("empty seed range {s}"));
    }
    Ok(a..b)
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource() {
        EXIT_RESOURCE
    } else {
        EXIT_INPUT
    }
}

/// An error as an SMT-LIB response line.
pub fn error_line(e: &Error) -> String {
    format!("(error \"{}\")", e.to_string().replace('"', "\"\""))
}

impl GlobalArgs {
    fn cache(&self) -> Result<ConwayCache> {
        let config = ConwayConfig {
            search_budget: self.budget,
            mr_rounds: self.mr_rounds,
            ..ConwayConfig::default()
        };
        let path = self.cache.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_FILE));
        ConwayCache::open(path, config)
    }

    fn solver(&self) -> SolverConfig {
        SolverConfig { budget: self.budget, order_seed: self.seed }
    }
}

fn numeral(s: &str) -> Result<BigUint> {
    s.parse().map_err(|_| Error::InvalidInput(format!("malformed numeral {s:?}")))
}

fn save_if_grown(cache: &ConwayCache, before: usize) -> Result<()> {
    if cache.entries().len() > before {
        cache.save()?;
    }
    Ok(())
}

fn solve(g: &GlobalArgs, file: &str, out: &mut dyn Write) -> Result<i32> {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| Error::Io(format!("{file}: {e}")))?
    };
    let cache = g.cache()?;
    let before = cache.entries().len();
    let script = parse_typed(&text, &cache)?;
    let summary = run_script(&script, &g.solver(), out)?;
    // a read-only working directory must not fail an otherwise clean run
    let _ = save_if_grown(&cache, before);
    Ok(if summary.command_errors > 0 { EXIT_INPUT } else { EXIT_OK })
}

fn conway(g: &GlobalArgs, p: &str, n: &str, out: &mut dyn Write) -> Result<i32> {
    let p = numeral(p)?;
    let n: u32 = n
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::InvalidInput(format!("degree must be a positive numeral, found {n:?}")))?;
    let cache = g.cache()?;
    let before = cache.entries().len();
    let modulus = PrimeModulus::with_rounds(p, g.mr_rounds)?;
    let poly = cache.conway_polynomial(&modulus, n)?;
    writeln!(out, "{}", format_entry(&poly))?;
    save_if_grown(&cache, before)?;
    Ok(EXIT_OK)
}

fn parse_sort(text: &str) -> Result<FieldSort> {
    let (p, n) = match text.split_once(':') {
        Some((p, n)) => (p, n),
        None => (text, "1"),
    };
    let n: u32 = n
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::InvalidInput(format!("bad extension degree in sort {text:?}")))?;
    Ok(FieldSort::new(numeral(p)?, n))
}

fn normalize(g: &GlobalArgs, sort: &str, literal: &str, out: &mut dyn Write) -> Result<i32> {
    let sort = parse_sort(sort)?;
    let coeffs: Vec<BigInt> = literal_coefficients(literal)?;
    let cache = g.cache()?;
    let before = cache.entries().len();
    let field = cache.field(&sort)?;
    let value = normalize_literal(&coeffs, &field)?;
    writeln!(out, "{}", print_literal(&value))?;
    let _ = save_if_grown(&cache, before);
    Ok(EXIT_OK)
}

fn prime(g: &GlobalArgs, p: &str, out: &mut dyn Write) -> Result<i32> {
    let p = numeral(p)?;
    if is_probable_prime(&p, g.mr_rounds)? {
        writeln!(out, "probable-prime")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "composite")?;
        Ok(EXIT_INPUT)
    }
}

fn diff(g: &GlobalArgs, args: &DiffArgs, out: &mut dyn Write) -> Result<i32> {
    let timeout = Duration::from_secs(g.timeout);
    let solvers = args
        .solvers
        .iter()
        .map(|s| ExternalSolverConfig::parse(s, timeout))
        .collect::<Result<Vec<_>>>()?;
    if solvers.is_empty() && !args.internal_only {
        return Err(Error::InvalidInput(
            "diff needs at least one --solver LABEL=CMD or --internal-only".into(),
        ));
    }
    let mut items: Vec<DiffItem> = Vec::new();
    if let Some(dir) = &args.corpus {
        items.extend(load_corpus(dir)?);
    }
    if let Some(seeds) = args.seeds.clone().or((args.corpus.is_none()).then_some(DEFAULT_SEEDS)) {
        items.extend(fuzz_corpus(seeds, &FuzzParams::default())?);
    }
    let cache = g.cache()?;
    let opts = DiffOptions {
        solvers,
        internal_only: args.internal_only,
        solver: g.solver(),
        jobs: args.jobs as usize,
    };
    let report = run_diff(&items, &opts, &cache);
    let text = if args.json { report.to_json_lines() } else { report.to_text() };
    out.write_all(text.as_bytes())?;
    Ok(if report.has_mismatch() { EXIT_MISMATCH } else { EXIT_OK })
}

/// Runs one parsed command, returning the exit status. Errors are reported
/// on `out` as `(error "…")`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> i32 {
    let g = &cli.global;
    let result = match &cli.command {
        Cmd::Solve { file } => solve(g, file, out),
        Cmd::Conway { p, n } => conway(g, p, n, out),
        Cmd::Normalize { sort, literal } => normalize(g, sort, literal, out),
        Cmd::Prime { p } => prime(g, p, out),
        Cmd::Diff(args) => diff(g, args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "{}", error_line(&e));
            exit_code(&e)
        }
    }
}

/// Parses arguments and runs. Usage errors go to `err` with exit status 1.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, out),
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            EXIT_INPUT
        }
        Err(e) => {
            // --help and --version
            let _ = write!(out, "{}", e.render());
            EXIT_OK
        }
    }
}
