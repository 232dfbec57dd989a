use thiserror::Error;

use crate::decrement::StallReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The request exceeds a configured size limit. `hint` tells the caller
    /// which path to take instead.
    #[error("capacity exceeded: {what} is {size}, limit is {limit}{hint}")]
    Capacity {
        what: &'static str,
        size: u128,
        limit: u128,
        hint: &'static str,
    },

    #[error("out of regime: {0}")]
    Regime(String),

    #[error("eigensolver failed to converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("eigendecomposition outside tolerance: {what} = {value:e} > {tol:e}")]
    Tolerance { what: &'static str, value: f64, tol: f64 },

    #[error("certificate rejected: diagonal entry {diag_max} exceeds 1 + {tol:e}")]
    CertificateRejected { diag_max: f64, tol: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("density decrement stalled at step {} (n = {})", .0.step, .0.n)]
    Stalled(Box<StallReport>),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Json(_) => 2,
            Error::Capacity { .. } => 3,
            Error::Regime(_) => 4,
            Error::Stalled(_) => 5,
            _ => 1,
        }
    }
}
