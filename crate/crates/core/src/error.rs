//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("discriminant 1 has no real quadratic field")]
    NoRealField,

    #[error("pole of zeta at s = 1")]
    ZetaPole,

    #[error("divergent request: {0}")]
    Divergent(String),

    #[error("vector ({a},{b},{c}) does not span a positive line (Q = {q})")]
    NotPositiveLine { a: i64, b: i64, c: i64, q: f64 },

    #[error("degenerate vector ({a},{b},{c})")]
    Degenerate { a: i64, b: i64, c: i64 },

    #[error("norms differ: {0} vs {1}")]
    NormMismatch(String, String),

    #[error("vector ({a},{b},{c}) is not isotropic")]
    NotIsotropic { a: i64, b: i64, c: i64 },

    #[error("no value coprime to {delta} represented by ({a},{b},{c}) within the search box")]
    RepresentationSearch { a: i64, b: i64, c: i64, delta: i64 },

    #[error("evaluation at a divisor point: z = {x} + {y}i is within {dist:e} of the divisor")]
    Singularity { x: f64, y: f64, dist: f64 },

    #[error("truncation budget infeasible: {0}")]
    BudgetInfeasible(String),

    #[error("non-finite integrand at z = {x} + {y}i")]
    NonFinite { x: f64, y: f64 },

    #[error("finite-difference step {h} too large: distance to divisor is {dist}")]
    StepTooLarge { h: f64, dist: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetInfeasible(_) | Error::RepresentationSearch { .. } => 2,
            _ => 3,
        }
    }
}
