use thiserror::Error;

/// Errors raised by problem evaluation, the proximal toolkit and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite {what} for objective {objective}")]
    NonFinite {
        objective: usize,
        what: &'static str,
    },

    #[error("point is outside the domain of g_{objective}")]
    Infeasible { objective: usize },

    #[error("zero step between consecutive iterates; BB ratio undefined")]
    DegenerateStep,

    #[error("dual solve did not converge: gap {gap:e} after {iters} iterations")]
    DualNotConverged { gap: f64, iters: usize },

    #[error("line search failed after {backtracks} backtracks (last t = {last_t:e})")]
    LineSearchFailed { last_t: f64, backtracks: usize },

    #[error("unknown problem '{key}'; available: {}", available.join(", "))]
    UnknownProblem { key: String, available: Vec<String> },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
