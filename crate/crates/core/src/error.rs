use thiserror::Error;

use crate::eigensolver::ConvergenceReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("block structure violated: entry ({row}, {col}) lies outside its diagonal block")]
    BlockStructure { row: usize, col: usize },

    #[error("singular matrix in {0}")]
    Singular(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("problem has no fission content (||B psi|| = 0)")]
    NoFission,

    #[error("GMRES stagnated after {iterations} iterations (relative residual {relative_residual:.3e})")]
    GmresStagnation {
        iterations: usize,
        relative_residual: f64,
        best: Vec<f64>,
    },

    #[error("linear solve failed in inverse power iteration {iteration}: {source}")]
    PowerIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("Newton did not converge within {max} iterations")]
    NewtonNotConverged {
        max: usize,
        report: Box<ConvergenceReport>,
    },

    #[error("line search failed at Newton iteration {iteration}: step shrank below {min_step:.3e}")]
    LineSearch { iteration: usize, min_step: f64 },

    #[error("finite-difference perturbation underflow: ||v|| = {0:e}")]
    DegenerateDirection(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },
}

impl Error {
    pub(crate) fn dim(context: &'static str, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            actual,
        }
    }
}
