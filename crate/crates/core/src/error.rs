use thiserror::Error;

/// Errors raised while building or querying the algebraic structures.
///
/// Axiom violations are not errors: they are reported as failed checks in a
/// [`Report`](crate::report::Report). Errors are reserved for inputs that are
/// malformed or outside an operation's domain.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Input(String),

    #[error("index {index} out of range for {what} of size {size}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("relations have ground sizes {left} and {right}")]
    GroundMismatch { left: usize, right: usize },

    #[error("closure exceeded the size cap of {cap} elements")]
    ClosureOverflow { cap: usize },

    #[error("projection data inconsistent: {0}")]
    Projections(String),

    #[error("graph is not a partial multiaction: {0}")]
    NotMultiaction(String),

    #[error("restriction structure incomplete: {0}")]
    Restriction(String),

    #[error("generators do not generate the semigroup: {0}")]
    NotGenerating(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("premorphism law violated: {0}")]
    Premorphism(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_index(what: &'static str, index: usize, size: usize) -> Result<()> {
    if index < size {
        Ok(())
    } else {
        Err(Error::OutOfRange { what, index, size })
    }
}
