use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use growthlab::engine::{Engine, DEFAULT_SEED};
use growthlab::spec_file::{parse_spec, Spec};
use growthlab::Error;

mod check;
mod report;

const SEED_ENV: &str = "GROWTHLAB_SEED";

/// Largest `--max-n` accepted by `table` and `check`.
const MAX_TABLE_N: u64 = 10_000_000;

#[derive(Parser)]
#[command(name = "growthlab", version, about = "Maximal subgroup growth of metabelian groups")]
struct Cli {
    /// Seed of the random source used by polynomial factorization
    /// (decimal or 0x-prefixed hex). Overrides GROWTHLAB_SEED.
    #[arg(long, global = true, value_parser = parse_seed)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Counts of maximal subgroups (or submodules) at prime power indices.
    Table {
        spec: PathBuf,
        #[arg(long)]
        max_n: u64,
        /// Use indices p^k for primes p ≤ max-n and k ≤ max-k instead.
        #[arg(long)]
        max_k: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Degree of maximal subgroup growth.
    Mdeg { spec: PathBuf },
    /// Leading term `(ρ₁, d)` of `N ⋊ Z`.
    Asymptote { spec: PathBuf },
    /// Growth type of a presented module or of `N ⋊ Z` over one.
    GrowthType { spec: PathBuf },
    /// Compares formula counts with brute-force enumeration.
    Check {
        spec: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_n: u64,
    },
    /// Number of monic irreducible polynomials of degree k over F_p.
    Irreducibles {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let r = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    r.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

/// A failure with its exit code.
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub(crate) fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn spec(e: Error) -> Self {
        Self::new(2, e.to_string())
    }

    pub(crate) fn compute(e: Error) -> Self {
        Self::new(3, e.to_string())
    }
}

/// Output and exit code of a command that ran to completion.
pub(crate) struct Outcome {
    pub(crate) stdout: String,
    pub(crate) code: u8,
}

fn load(path: &Path) -> Result<Spec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text).map_err(Failure::spec)
}

fn check_max_n(n: u64) -> Result<(), Failure> {
    if !(2..=MAX_TABLE_N).contains(&n) {
        return Err(Failure::new(2, format!("--max-n must lie in 2..={MAX_TABLE_N}, got {n}")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let seed = match (cli.seed, std::env::var(SEED_ENV)) {
        (Some(s), _) => s,
        (None, Ok(v)) => parse_seed(&v).map_err(|e| Failure::new(2, format!("{SEED_ENV}: {e}")))?,
        (None, Err(_)) => DEFAULT_SEED,
    };
    let engine = Engine::new(seed);
    let done = |stdout: String| Ok(Outcome { stdout, code: 0 });
    match cli.cmd {
        Cmd::Table { spec, max_n, max_k, format } => {
            check_max_n(max_n)?;
            let spec = load(&spec)?;
            let indices = match max_k {
                Some(k) => growthlab::groups::prime_powers_by_exponent(max_n, k).map_err(Failure::spec)?,
                None => growthlab::groups::prime_powers_up_to(max_n),
            };
            done(report::table(&engine, &spec, &indices, matches!(format, Format::Json), seed)?)
        }
        Cmd::Mdeg { spec } => done(report::mdeg(&engine, &load(&spec)?)?),
        Cmd::Asymptote { spec } => done(report::asymptote(&engine, &load(&spec)?)?),
        Cmd::GrowthType { spec } => done(report::growth_type(&engine, &load(&spec)?)?),
        Cmd::Check { spec, max_n } => {
            check_max_n(max_n)?;
            check::run(&engine, &load(&spec)?, max_n)
        }
        Cmd::Irreducibles { p, k } => {
            let n = growthlab::poly::count_irreducibles(p, k).map_err(Failure::spec)?;
            done(format!("{n}\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("growthlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
