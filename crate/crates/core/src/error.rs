use thiserror::Error;

use crate::algebra::Var;

/// Errors raised across the toolkit.
///
/// Variants that signal an internal inconsistency (odd coefficients in a
/// u-series, non-integral KKV coefficients, ...) are kept distinct from
/// caller errors so the CLI can map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable mismatch: {left} vs {right}")]
    VariableMismatch { left: Var, right: Var },

    #[error("series is identically zero to its truncation order")]
    ZeroSeries,

    #[error("leading coefficient is not invertible")]
    NotInvertible,

    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("nonzero coefficient at degree {degree} where the grading requires it to vanish")]
    NonzeroConstantTerm { degree: i64 },

    #[error("graded series has no unit term at grade 0")]
    MissingUnit,

    #[error("graded series already carries a grade-0 term")]
    UnexpectedUnit,

    #[error("graded series have different maximal degrees ({left} vs {right})")]
    GradeMismatch { left: usize, right: usize },

    #[error("Laurent polynomial is not symmetric under z <-> 1/z at degree {degree}")]
    NotSymmetric { degree: i64 },

    #[error("truncation order {order} too small (need at least {required})")]
    OrderTooSmall { order: i64, required: i64 },

    #[error("nonzero odd-degree coefficient at u^{degree}")]
    OddCoefficient { degree: i64 },

    #[error("nonzero imaginary part at u^{degree}")]
    ImaginaryCoefficient { degree: i64 },

    #[error("non-integral value {value} at (g={genus}, h={h})")]
    NonIntegral { genus: u32, h: i64, value: String },

    #[error("z-degree {degree} of the q^{h} coefficient exceeds {h}")]
    DegreeBound { h: i64, degree: i64 },

    #[error("column h={h} outside the grid (h_max={h_max})")]
    OutsideGrid { h: i64, h_max: u32 },

    #[error("inconsistent truncation ranges: {0}")]
    InconsistentRange(String),

    #[error("index mismatch: {0}")]
    IndexMismatch(String),

    #[error("singular matrix ({rows}x{cols}, rank {rank})")]
    Singular { rows: usize, cols: usize, rank: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
