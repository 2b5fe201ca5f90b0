//! `sidon`: exclude distributions of Sidon sets and APN graphs from the
//! command line.
//!
//! Exit codes: 0 success, 1 a checked property is false, 2 usage or
//! validation error, 3 internal invariant breach.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sidon", version, about = "Exclude distributions of Sidon sets and APN graphs")]
pub struct Cli {
    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Text,
    Svg,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field degree / number of variables
    #[arg(long)]
    pub n: Option<u32>,
    /// Defining polynomial as an integer (hex with 0x)
    #[arg(long)]
    pub modulus: Option<String>,
    /// Config file with `modulus.<n> = <int>` entries (or JSON)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exclude distribution of the graph of a function
    Dist {
        spec: String,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Use brute-force enumeration and compare with the Walsh route
        #[arg(long)]
        oracle: bool,
        /// Include per-coset histograms
        #[arg(long)]
        per_coset: bool,
        /// Record wall-clock timings in the report
        #[arg(long)]
        timings: bool,
        /// Cache directory (else $SIDON_CACHE_DIR, else none)
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// APN / AB / plateaued / unbalanced-components / degree table
    Check {
        spec: String,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Uniformity of the graph distribution on Q(F) and Q*(F)
    Uniform {
        spec: String,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce the uniformity table for the non-AB APN roster
    Table3 {
        /// Add the n = 9 and n = 10 rows
        #[arg(long)]
        include_n10: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a theorem or conjecture checker
    Verify {
        #[arg(value_enum)]
        theorem: Theorem,
        /// Function spec (some checks have a default)
        spec: Option<String>,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Draw a Sidon set (or a function's graph) with its multiplicities
    Render {
        /// Function spec; the graph is drawn
        spec: Option<String>,
        /// Point-set file instead of a function
        #[arg(long, conflicts_with = "spec")]
        set: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: RenderFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 24)]
        cell_size: u32,
        #[arg(long)]
        no_labels: bool,
    },
    /// Equivalence checks
    Equiv {
        #[command(subcommand)]
        kind: EquivKind,
    },
    /// Generic Sidon sets
    Set {
        #[command(subcommand)]
        action: SetAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// image {alpha, beta} with the stated counts (n even)
    GoldKasami,
    /// solution counts of F(x)+F(y)+F(x+y) = b (n even)
    Carlet,
    /// integrality of the two candidate multiplicities for even n <= 16
    Integrality,
    /// constant distribution on (a, 0) and (0, b) (n odd)
    ZeroFlat,
    /// uniform on Q(F) implies maximal
    UniformMaximal,
    /// every c != 0 is a sum F(x)+F(y)+F(z)+F(x+y+z)
    Dproperty,
    /// Walsh-sum maximality criterion
    WalshBound,
    /// 6 d(a,b) = #{F(x)+F(y)+F(a) = b}
    PlateauedIdentity,
    /// translations between cosets preserve d
    LocalEquiv,
    /// AB iff constant distribution (n odd)
    AbConstant,
}

#[derive(Subcommand, Debug)]
pub enum EquivKind {
    /// Equal multiplicity histograms of two point sets
    Ed {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cyclotomic equivalence of two exponents
    Cyclotomic {
        #[arg(long)]
        n: u32,
        d: u64,
        d2: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum SetAction {
    /// Greedy random maximal Sidon set
    Random {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exclude distribution of a point-set file
    Dist {
        path: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match commands::run(cli.command) {
        Ok(commands::Outcome::Holds) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 3 } else { 2 })
        }
    }
}
