//! LP data model, sparse kernels, standard-form canonicalization, residuals
//! and termination tests shared by every solver and tool in the crate.

mod problem;
mod residuals;
mod sparse;
mod standard;

pub use problem::{is_valid_name, LpProblem};
pub use residuals::{
    check_termination, residuals, Algorithm, NormPair, PrimalDualIterate, ResidualReport,
    ToleranceProfile,
};
pub use sparse::SparseMatrix;
pub(crate) use standard::norm2;
pub use standard::{ColumnMap, RowMap, StandardFormOptions, StandardLp};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    Dimension {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("invalid sparse structure: {0}")]
    Structure(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("NaN in {0}")]
    NaN(String),
    #[error("inconsistent bounds on {what} {index}: lower {lower} > upper {upper}")]
    InvertedBounds {
        what: &'static str,
        index: usize,
        lower: f64,
        upper: f64,
    },
    #[error("row {0} is free (both sides infinite)")]
    FreeRow(usize),
    #[error("invalid name {0:?}")]
    InvalidName(String),
}
