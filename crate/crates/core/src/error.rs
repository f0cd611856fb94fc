use thiserror::Error;

use crate::stgroup::StGroup;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("curve {label} has bad reduction at p = {p}")]
    BadReduction { label: String, p: u64 },

    #[error("prime {p} exceeds the configured counting cap {cap}")]
    BudgetExceeded { p: u64, cap: u64 },

    #[error("Weil bound violated at norm {norm}: {detail}")]
    WeilViolation { norm: u64, detail: String },

    #[error("parse error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },

    #[error("input not sorted by norm: {prev} followed by {next}")]
    Order { prev: u64, next: u64 },

    #[error("character {label} does not belong to group {group}")]
    GroupMismatch { label: String, group: StGroup },

    #[error("decomposition residual {residual:.3e} exceeds {limit:.0e}; raise the index bound")]
    ResidualTooLarge { residual: f64, limit: f64 },

    #[error("virtual character contains the trivial character (coefficient {coeff})")]
    TrivialPresent { coeff: String },

    #[error("statistic queried on an empty series")]
    EmptySeries,

    #[error("no analytic rank supplied for {0}")]
    MissingRank(String),

    #[error("CM base change requires r_sym3 >= r (got r = {rank}, r_sym3 = {sym3_rank})")]
    CmConstraintViolation { rank: u32, sym3_rank: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::parse(Some(e.line()), e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line() as usize);
        Error::parse(line, e.to_string())
    }
}
