use thiserror::Error;

/// Errors produced by the tomography routines.
#[derive(Debug, Error)]
pub enum TomoError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid density state: {}", .0.join("; "))]
    InvalidState(Vec<String>),

    #[error("degenerate ray (mu, nu) = (0, 0): the tomogram is a delta distribution there")]
    DegenerateRay,

    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not positive semidefinite (minimal eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("ray ({mu}, {nu}) is not present in the tabulated tomogram")]
    RayNotTabulated { mu: f64, nu: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, TomoError>;
