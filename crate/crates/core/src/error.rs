use thiserror::Error;

/// Errors raised by set-function construction, evaluation and certification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} supports n <= {cap}, got n = {got}")]
    Capacity {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("mask {mask} has bits outside a ground set of size {n}")]
    ForeignMask { mask: String, n: usize },

    #[error("closed form mismatch in {case}: direct {direct}, closed form {closed}")]
    ClosedFormMismatch {
        case: &'static str,
        direct: String,
        closed: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn capacity(what: &'static str, cap: usize, got: usize) -> Result<()> {
    if got > cap {
        Err(Error::Capacity { what, cap, got })
    } else {
        Ok(())
    }
}
