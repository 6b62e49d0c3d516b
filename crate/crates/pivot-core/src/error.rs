use thiserror::Error;

/// Errors shared across the crate.
///
/// Mathematical negatives (a complex failing exactness, a matching violating
/// the Morse conditions, ...) are not errors; they are reported through the
/// report types of the operations that check them. Errors signal contract
/// violations, malformed inputs, or exhausted resource budgets.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },

    #[error("monomial quotient undefined: divisor exceeds dividend in variable {position}")]
    NotDivisible { position: usize },

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("generators not minimal: generator {divisor} divides generator {multiple}")]
    NonMinimalGenerators { divisor: usize, multiple: usize },

    #[error("an ideal needs at least one generator")]
    EmptyIdeal,

    #[error("generator {index} is a unit; the ideal must be proper")]
    UnitGenerator { index: usize },

    #[error("cell budget exceeded: construction needs {needed} cells, limit is {limit}")]
    CellLimit { needed: u128, limit: u128 },

    #[error("gradient path budget exceeded: limit {limit}")]
    PathLimit { limit: u64 },

    #[error("invalid pivot index set: {reason}")]
    InvalidPivotSet { reason: String },

    #[error("invalid Morse matching: {reason}")]
    InvalidMatching { reason: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("differential squared is nonzero into degree {degree} at entry ({row}, {col})")]
    DSquared { degree: usize, row: usize, col: usize },

    #[error("polynomial not in the ideal: term {term} is divisible by no generator")]
    NotInIdeal { term: String },

    #[error("homotopy verification failed: {0}")]
    HomotopyUnverified(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
