use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("point {0} is not in the lattice")]
    NotInLattice(String),
    #[error("form {0} is not primitive")]
    NotPrimitive(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("facet {0} does not exist")]
    NoSuchFacet(usize),
    #[error("{0} is not a column vector")]
    NotAColumn(String),
    #[error("polytope has no column vectors")]
    NoColumns,
    #[error("polytope is not balanced")]
    NotBalanced,
    #[error("supplied facets rejected: {0}")]
    BadFacets(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ring error: {0}")]
    Ring(String),
    /// An internal consistency check failed. This indicates a bug.
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
