mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hurwitz_core::DEFAULT_WORK_BOUND;

/// Weighted double Hurwitz numbers: character sums, τ-function tables and
/// constellation counts.
#[derive(Parser, Debug)]
#[command(name = "hurwitz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Number of numerator parameters c_1..c_L.
    #[arg(long = "L", default_value_t = 0)]
    pub l: usize,
    /// Number of denominator parameters d_1..d_M.
    #[arg(long = "M", default_value_t = 1)]
    pub m: usize,
    /// Largest number of sheets N (default 3; 12 for `verify hciz`).
    #[arg(long = "Nmax")]
    pub n_max: Option<usize>,
    /// Largest β exponent d.
    #[arg(long = "dmax", default_value_t = 2)]
    pub d_max: usize,
    /// Cap on permutation compositions for brute-force enumeration.
    #[arg(long = "work-bound", env = "HURWITZ_WORK_BOUND", default_value_t = DEFAULT_WORK_BOUND)]
    pub work_bound: u128,
    /// Write JSON here instead of stdout.
    #[arg(long = "out")]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn n_max_or(&self, default: usize) -> usize {
        self.n_max.unwrap_or(default)
    }
}

#[derive(Args, Debug, Clone)]
pub struct Numeric {
    /// Numeric values for c_1..c_L, comma separated rationals.
    #[arg(long = "c", value_delimiter = ',', allow_hyphen_values = true)]
    pub c: Option<Vec<String>>,
    /// Numeric values for d_1..d_M, comma separated rationals.
    #[arg(long = "d", value_delimiter = ',', allow_hyphen_values = true)]
    pub d: Option<Vec<String>>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Character,
    Bruteforce,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Tau,
    Constellations,
    Connected,
    Hciz,
}

#[derive(Args, Debug, Clone)]
pub struct Matrix {
    /// Matrix size n.
    #[arg(long = "n", default_value_t = 2)]
    pub n: usize,
    #[arg(long = "gamma", default_value_t = 0.05, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Override β; defaults to -1/(n d_1).
    #[arg(long = "beta", allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Eigenvalues of A, comma separated.
    #[arg(long = "a", value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<f64>>,
    /// Eigenvalues of B, comma separated.
    #[arg(long = "b", value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<f64>>,
    /// Relative tolerance for `verify hciz`.
    #[arg(long = "tol", default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pure Hurwitz number of a tuple of profiles.
    Pure {
        /// Semicolon separated partitions, e.g. "(2,1);(2,1);(3)".
        #[arg(long)]
        profiles: String,
        /// Also count transitive factorizations only.
        #[arg(long)]
        connected: bool,
        #[arg(long, value_enum, default_value_t = Method::Character)]
        method: Method,
        #[arg(long = "work-bound", env = "HURWITZ_WORK_BOUND", default_value_t = DEFAULT_WORK_BOUND)]
        work_bound: u128,
        #[arg(long = "out")]
        out: Option<PathBuf>,
    },
    /// Weighted double Hurwitz numbers H^d(μ, ν) for d ≤ dmax.
    Weighted {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        numeric: Numeric,
        /// "μ;ν", e.g. "(3);(2,1)".
        #[arg(long)]
        profiles: String,
        /// Connected numbers, from transitive brute-force counts.
        #[arg(long)]
        connected: bool,
    },
    /// Coefficient table of the τ-function (or its logarithm).
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        connected: bool,
    },
    /// Census of constellation classes for one spectrum.
    Constellations {
        #[command(flatten)]
        common: Common,
        /// Square multiplicities "J1,J2,…"; its length sets M.
        #[arg(long, default_value = "")]
        spectrum: String,
    },
    /// Cross-check suites; exit 4 on any mismatch.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        matrix: Matrix,
    },
    /// Closed HCIZ (or, with --c and --d, linear-over-linear) integral against its τ-series.
    Hciz {
        #[command(flatten)]
        matrix: Matrix,
        #[command(flatten)]
        numeric: Numeric,
        /// Series truncation N_max.
        #[arg(long = "Nmax", default_value_t = 12)]
        n_max: usize,
        #[arg(long = "out")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Pure {
            profiles,
            connected,
            method,
            work_bound,
            out,
        } => commands::pure(&profiles, connected, method, work_bound).and_then(|o| o.emit(out.as_deref())),
        Command::Weighted {
            common,
            numeric,
            profiles,
            connected,
        } => commands::weighted(&common, &numeric, &profiles, connected).and_then(|o| o.emit(common.out.as_deref())),
        Command::Table { common, connected } => {
            commands::table(&common, connected).and_then(|o| o.emit(common.out.as_deref()))
        }
        Command::Constellations { common, spectrum } => {
            commands::constellations(&common, &spectrum).and_then(|o| o.emit(common.out.as_deref()))
        }
        Command::Verify { check, common, matrix } => {
            commands::verify(check, &common, &matrix).and_then(|o| o.emit(common.out.as_deref()))
        }
        Command::Hciz {
            matrix,
            numeric,
            n_max,
            out,
        } => commands::hciz(&matrix, &numeric, n_max).and_then(|o| o.emit(out.as_deref())),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.error);
            if let Some(partial) = e.partial {
                println!("{}", serde_json::to_string_pretty(&partial).expect("json"));
            }
            ExitCode::from(e.code)
        }
    }
}
