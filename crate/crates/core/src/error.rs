use thiserror::Error;

/// Errors raised by series arithmetic, blend evaluation, the ODE marcher and
/// the document readers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("division by a series with zero constant term at knot {knot}")]
    ZeroDivisor { knot: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value while evaluating a blend of grades ({m}, {n})")]
    Overflow { m: usize, n: usize },

    #[error("point {point} does not lie on any segment of the path")]
    OffPath { point: String },

    #[error("series oracle failed at {point}: {message}")]
    Oracle { point: String, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid document at {path}: {message}")]
    Document { path: String, message: String },

    #[error("singular collocation system (condition estimate {condition:e})")]
    SingularCollocation { condition: f64 },

    #[error("step size fell below h_min = {h_min:e} at {at} with residual {residual:e}")]
    StepSizeUnderflow {
        at: String,
        h_min: f64,
        residual: f64,
    },

    #[error("no sign change of the target function in the bracket [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
