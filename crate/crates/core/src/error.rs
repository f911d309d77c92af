use thiserror::Error;

use crate::symmetrizer::SymmetrizerError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("content of the zero point is undefined")]
    ZeroContent,

    #[error("projective distance needs non-zero points")]
    ZeroPoint,

    #[error("matrix is singular (determinant 0)")]
    Singular,

    #[error("seed pair is not admissible: {0}")]
    NotAdmissible(SymmetrizerError),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate sequence: {0}")]
    Degenerate(String),

    /// The requested precision could not be certified within the depth budget.
    #[error("precision unreachable: wanted {wanted}, best error bound 10^{best_log10:.1} at depth {depth}")]
    PrecisionUnreachable {
        wanted: String,
        best_log10: f64,
        depth: usize,
    },

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("not enough records to estimate a slope (need 3, got {0})")]
    TooFewRecords(usize),

    #[error("report serialization failed: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
