use thiserror::Error;

use crate::fan::FanIssue;
use crate::polyhedra::EnumerationError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid fan: {0}")]
    InvalidFan(#[from] FanIssue),
    #[error("fan is not complete")]
    IncompleteFan,
    #[error("fan is not smooth: maximal cone {cone} is not unimodular")]
    NotSmooth { cone: usize },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("{what}: expected length {expected}, found {found}")]
    Length { what: String, expected: usize, found: usize },
    #[error("a split bundle needs at least two summands, got {0}")]
    BundleRank(usize),
    #[error("polynomial {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: String, found: String },
    #[error("polynomial is not linear in the fiber variables: term {term}")]
    NotLinearInFiber { term: String },
    #[error("root {variable} -> {variable} + {monomial} is neither a base nor a fiber root")]
    UnsplitRoot { variable: String, monomial: String },
    #[error("substitution image for variable {index} is not homogeneous of the variable's degree")]
    NotGraded { index: usize },
    #[error("value {0} does not fit in 64 bits")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
