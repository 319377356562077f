//! `symdet`: weights, spectra and minimum distances of symmetric
//! determinantal codes.
//!
//! Exit codes: 0 success with every check passing, 1 some check failed,
//! 2 usage error, 3 enumeration budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symdet::harness::{render, run, Command, Format, RunConfig};
use symdet::symmat::DEFAULT_BUDGET;
use symdet::{Error, SquareClass, Variant};

#[derive(Parser)]
#[command(
    name = "symdet",
    version,
    about = "Symmetric determinantal codes over odd prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Length and dimension of a code.
    Params(Opts),
    /// Weights W_k(t, m) by every available method.
    Weight(Opts),
    /// Full weight spectrum with multiplicities.
    Spectrum(Opts),
    /// Minimum distance.
    Mindist(Opts),
    /// Every cross-check at one (q, m).
    Verify(Opts),
    /// Fiber counts of the first-row projection at even rank --t.
    Fibers(Opts),
    /// Odd-rank minimum-distance conjecture at rank --t.
    Conjecture(Opts),
    /// Compare the printed weight tables (m = 3, 4, 5) with computed weights.
    Tables(Opts),
    /// Emit the regression corpus.
    Corpus(Opts),
}

#[derive(Args, Clone)]
struct Opts {
    /// Field order (odd prime).
    #[arg(long, default_value_t = 3)]
    q: u64,
    /// Matrix size.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Rank bound.
    #[arg(long)]
    t: Option<usize>,
    /// Index of the diagonal functional.
    #[arg(long)]
    k: Option<usize>,
    /// Square class of delta.
    #[arg(long, value_parser = parse_class)]
    delta_class: Option<SquareClass>,
    #[arg(long, default_value = "affine", value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest number of matrices any single enumeration may visit.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Leave runtime_ms null so that output is byte-stable.
    #[arg(long)]
    no_timing: bool,
}

fn parse_class(s: &str) -> Result<SquareClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, o) = match cli.command {
        Cmd::Params(o) => (Command::Params, o),
        Cmd::Weight(o) => (Command::Weight, o),
        Cmd::Spectrum(o) => (Command::Spectrum, o),
        Cmd::Mindist(o) => (Command::Mindist, o),
        Cmd::Verify(o) => (Command::Verify, o),
        Cmd::Fibers(o) => (Command::Fibers, o),
        Cmd::Conjecture(o) => (Command::Conjecture, o),
        Cmd::Tables(o) => (Command::Tables, o),
        Cmd::Corpus(o) => (Command::Corpus, o),
    };
    let cfg = RunConfig {
        q: o.q,
        m: o.m,
        t: o.t,
        k: o.k,
        delta_class: o.delta_class,
        variant: o.variant,
        budget: o.budget,
        workers: o.workers.map(|w| w as usize),
        timing: !o.no_timing,
    };
    let report = match run(command, &cfg) {
        Ok(r) => r,
        Err(e @ Error::BudgetExceeded { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = if command == Command::Corpus && o.format == Format::Json {
        // the corpus file itself, not wrapped in a report
        serde_json::to_string_pretty(&report.results).expect("serializable") + "\n"
    } else {
        render(&report, o.format)
    };
    match &o.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    let failed: Vec<_> = report.failures().collect();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{} of {} checks failed:", failed.len(), report.checks.len());
        for c in failed {
            eprintln!("  {}", c.name);
        }
        ExitCode::from(1)
    }
}
