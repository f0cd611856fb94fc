mod commands;
mod data;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "strate", version, about = "Sato-Tate convergence-rate statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler factors at good primes up to the bound, as CSV.
    Lpoly,
    /// Normalized conjugacy-class points, as CSV.
    Classes,
    /// delta(phi, x) at checkpoints, as CSV (and optionally SVG).
    Delta,
    /// I(phi, X) with predicted values, as JSON.
    Ipnorm,
    /// Bias mean with its predicted limit, as JSON.
    Bias,
    /// Irreducible decomposition of a character expression, as JSON.
    Decompose,
    /// Frobenius-Schur index of an irreducible character.
    Fs,
    /// I_1, I_2 and the bias prediction from rank and zero data.
    Predict,
    /// R, C, S and the explicit upper bounds.
    Bound,
    /// Haar-distributed class points, as CSV.
    Sample,
    /// SVG line plot of one or more two-column CSV files.
    Plot {
        /// CSV files whose first two columns are x and y.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Logarithmic x axis.
        #[arg(long)]
        log_x: bool,
        #[arg(long, default_value = "")]
        title: String,
    },
}

#[derive(Debug, Args)]
pub struct Opts {
    /// Curve file (JSON lines).
    #[arg(long, global = true)]
    pub curve: Option<PathBuf>,
    /// Label of the curve to use; defaults to the first one in the file.
    #[arg(long, global = true)]
    pub label: Option<String>,
    /// Prime (norm) bound X, e.g. 1e6.
    #[arg(long, global = true, value_parser = parse_bound)]
    pub bound: Option<u64>,
    /// Sato-Tate group tag (U1, NU1, SU2, SU2xSU2, USp4).
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Read Euler factors from a CSV file instead of counting.
    #[arg(long, global = true)]
    pub ingest: Option<PathBuf>,
    /// Base change to the quadratic field of this discriminant.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub disc: Option<i64>,
    /// Character expression such as "a1^3" or "s2 + 1", or @file.json.
    #[arg(long = "char", global = true)]
    pub character: Option<String>,
    /// Rank file (JSON).
    #[arg(long, global = true)]
    pub ranks: Option<PathBuf>,
    /// Zero file (plain text).
    #[arg(long, global = true)]
    pub zeros: Option<PathBuf>,
    /// Output file; stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Additional SVG plot output.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Number of log-spaced checkpoints; 0 (the default) writes every jump.
    #[arg(long, global = true, default_value_t = 0)]
    pub checkpoints: usize,
    /// Write |delta|^2 instead of delta.
    #[arg(long, global = true)]
    pub squared: bool,
    /// Largest prime counted on genus-2 curves.
    #[arg(long = "g2-cap", global = true, default_value_t = strate::arith::G2_DEFAULT_CAP)]
    pub g2_cap: u64,
    #[arg(long = "K1", global = true, default_value_t = 1.0)]
    pub k1: f64,
    #[arg(long = "K2", global = true, default_value_t = 1.0)]
    pub k2: f64,
    #[arg(long = "K3", global = true, default_value_t = 1.0)]
    pub k3: f64,
    #[arg(long = "K4", global = true, default_value_t = 1.0)]
    pub k4: f64,
    #[arg(long = "K5", global = true, default_value_t = 1.0)]
    pub k5: f64,
    #[arg(long = "K6", global = true, default_value_t = 1.0)]
    pub k6: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Norm of the conductor, for the bounds.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub conductor: f64,
    /// Degree of the base field, for the bounds.
    #[arg(long = "field-degree", global = true, default_value_t = 1.0)]
    pub field_degree: f64,
    /// Largest label index searched by numeric decomposition.
    #[arg(long, global = true)]
    pub max: Option<u32>,
    /// Number of samples.
    #[arg(long, global = true, default_value_t = 1000)]
    pub count: usize,
}

fn parse_bound(s: &str) -> Result<u64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s}"))?;
    if !v.is_finite() || v < 2.0 || v > 1e15 {
        return Err(format!("bound must lie in [2, 1e15], got {s}"));
    }
    Ok(v as u64)
}

/// A failed run: message plus process exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }
}

impl From<strate::Error> for Failure {
    fn from(e: strate::Error) -> Self {
        use strate::Error as E;
        let code = match e {
            E::BudgetExceeded { .. } => 3,
            E::ResidualTooLarge { .. } => 4,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
