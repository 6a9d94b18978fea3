use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("Hermitian eigensolver did not converge on\n{matrix}")]
    EigenNoConvergence { matrix: String },

    #[error("invalid duration {0}")]
    InvalidDuration(f64),

    #[error("unknown control operator `{0}`")]
    UnknownControl(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Norm drift or another invariant of the propagation was violated.
    #[error("numerical fault: {0}")]
    NumericalFault(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
