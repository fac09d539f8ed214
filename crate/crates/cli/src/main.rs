//! `necklace`: command-line access to necklace-core.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a checked property failed
//! or a counterexample was found.

mod commands;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use emit::{Emitter, Format};

#[derive(Parser, Debug)]
#[command(
    name = "necklace",
    version,
    about = "Exact necklace polynomials and their cyclotomic factors"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Worker threads for parallel scans
    #[arg(long, global = true, env = "NECKLACE_JOBS", default_value_t = default_jobs(),
          value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Largest group order accepted
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub max_group_order: u64,

    /// Largest binom(d + n, n) for building P_{d,n} and M_{d,n}
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub degree_budget: u64,

    /// Largest candidate scanned when picking a prime in a residue class
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..))]
    pub prime_cutoff: u64,
}

fn default_jobs() -> u64 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u64)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Minus,
    Plus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    #[value(name = "R", alias = "r", alias = "real")]
    Real,
    #[value(name = "C", alias = "c", alias = "complex")]
    Complex,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// d * M_d(x) and M_d(x), one record per d
    Md {
        #[arg(long = "d", required = true, num_args = 1.., value_delimiter = ',')]
        ds: Vec<u64>,
    },
    /// Cyclotomic factors of S_d(x), or of a polynomial read from JSON
    Factors {
        #[arg(long = "d", num_args = 1.., value_delimiter = ',', conflicts_with = "poly")]
        ds: Vec<u64>,
        /// File holding a polynomial in JSON form
        #[arg(long)]
        poly: Option<PathBuf>,
    },
    /// Scan every d <= d-max and m <= m-max for the cyclotomic-factor disjunction
    VerifyConjecture {
        #[arg(long, default_value_t = 60)]
        m_max: u64,
        #[arg(long, default_value_t = 1000)]
        d_max: u64,
        #[arg(long, default_value_t = 50)]
        shard_size: u64,
        /// Resume from and write progress to this file
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Trace of M_d(zeta_m) down to Q, with the closed form alongside
    Trace {
        #[arg(long = "d", required = true, num_args = 1.., value_delimiter = ',')]
        ds: Vec<u64>,
        #[arg(long = "m", required = true, num_args = 1.., value_delimiter = ',')]
        ms: Vec<u64>,
    },
    /// Primitive necklace systems modulo m (or 2m when signed)
    Systems {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        signed: bool,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
    /// The minimal d attached to a necklace system
    MinimalD {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        signed: bool,
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        residues: Vec<u64>,
    },
    /// G-necklace polynomial of a group, with a chain factorization
    Group {
        /// c{d}, d{2d}, q8, s3 or s4
        #[arg(long, conflicts_with = "table")]
        preset: Option<String>,
        /// Cayley table JSON file
        #[arg(long)]
        table: Option<PathBuf>,
        /// Chain as subgroup bitmasks, bottom first; defaults to an automatic chain
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        chain: Vec<u64>,
        /// Bottom subgroup for the automatic chain
        #[arg(long, default_value_t = 1)]
        base: u64,
    },
    /// Exponents b_j of a series a_0 + a_1 t + ... read from JSON
    EulerInvert {
        #[arg(long, conflicts_with = "geometric")]
        input: Option<PathBuf>,
        /// Invert 1/(1 - x t) up to this order instead of reading a file
        #[arg(long)]
        geometric: Option<u64>,
    },
    /// Series of prod (1 - t^j)^(-b_j) from exponents read from JSON
    EulerExpand {
        #[arg(long)]
        input: PathBuf,
        /// Truncation order; defaults to the number of exponents
        #[arg(long)]
        order: Option<u64>,
    },
    /// Higher necklace polynomials M_{d,n}, or their values at zeta_m
    Higher {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d_max: u64,
        /// Evaluate at a primitive m-th root of unity without building M_{d,n}
        #[arg(long)]
        zeta: Option<u64>,
    },
    /// Euler characteristics of spaces of irreducible polynomials
    EulerChar {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d_max: u64,
        #[arg(long, value_enum)]
        field: FieldArg,
    },
    /// Balanced base-b expansion of n
    Balanced {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        base: u64,
    },
    /// Whether (x^m - 1)/(x - 1) divides Phi_d(x) - 1
    PhiCheck {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: u64,
    },
    /// S_d(x) modulo x^m - 1 and whether l^j divides its coefficients
    Local {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, default_value_t = 1)]
        j: u32,
    },
    /// Compare S_d and S_e modulo x^m -+ 1 for primewise congruent d, e
    Primewise {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
    },
}

/// Whether a run found what it was checking to be false.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Violated,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Holds
        } else {
            Status::Violated
        }
    }

    pub fn and(self, other: Status) -> Status {
        if self == Status::Holds && other == Status::Holds {
            Status::Holds
        } else {
            Status::Violated
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.config.jobs as usize)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let mut out = Emitter::stdout(cli.config.format);
    match commands::run(&cli.command, &cli.config, &mut out) {
        Ok(Status::Holds) => ExitCode::SUCCESS,
        Ok(Status::Violated) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
