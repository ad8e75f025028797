use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "slopecert", version, about = "Hecke traces, U_p slopes and Gouvea-Mazur certificates")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cache directory (defaults to the user cache directory).
    #[arg(long, env = "SLOPECERT_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disable the persistent cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Record wall-clock timing in reports (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Cap on Manin symbols `(k - 1) psi(N)`.
    #[arg(long, default_value_t = 50_000, global = true)]
    pub max_generators: u64,
    /// Cap on `2 sqrt(n)` for a single trace, i.e. the length of the t-sum.
    #[arg(long, default_value_t = 10_000_000, global = true)]
    pub max_trace_terms: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace of T_n on S_k(Gamma0(N)), exactly or modulo M.
    Trace {
        #[arg(long = "N")]
        level: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        /// Reduce modulo this positive integer.
        #[arg(long = "mod")]
        modulus: Option<String>,
    },
    /// U_p slopes on S_k(Gamma0(Np)).
    Slopes {
        #[arg(long)]
        p: u64,
        #[arg(long = "N")]
        level: u64,
        #[arg(long)]
        k: u32,
    },
    /// Compare slope counts at two weights.
    Compare {
        #[arg(long)]
        p: u64,
        #[arg(long = "N")]
        level: u64,
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
        /// Extra slopes to compare at (rationals such as 1/2).
        #[arg(long)]
        alpha: Vec<String>,
        #[arg(long, default_value = "0")]
        alpha_min: String,
        #[arg(long, default_value = "1")]
        alpha_max: String,
        /// Write the certificate here when a violation is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weight 16 against weight 3438 at p = 59, level 1.
    Theorem1 {
        /// Number of leading coefficients, computed modulo 59^(depth+1).
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Certificate output path.
        #[arg(long, default_value = "theorem1.cert.json")]
        out: PathBuf,
    },
    /// Sweep N <= nmax, 5 not dividing N, comparing weights 6 and 26 at p = 5.
    Theorem2 {
        #[arg(long, default_value_t = 83)]
        nmax: u64,
        /// Directory for one certificate file per violating level.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Replay a certificate from its evidence.
    Verify { certificate: PathBuf },
}
