use thiserror::Error;

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{solver} did not converge within {iterations} iterations (relative residual {residual:.3e})")]
    NotConverged {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("degenerate element {0}: singular local system")]
    DegenerateElement(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for failures of the iterative or direct solvers.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. } | Error::Factorization(_) | Error::DegenerateElement(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
