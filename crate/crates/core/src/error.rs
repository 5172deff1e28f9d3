use thiserror::Error;

/// Errors reported by state construction, linear algebra, and measure evaluation.
///
/// Every variant is a domain error: the input violated a documented
/// precondition. Numerical noise inside stated tolerances is absorbed
/// (clamped), never reported.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: max deviation {0:.3e} exceeds tolerance")]
    NotHermitian(f64),

    #[error("matrix is not unitary: max deviation {0:.3e} exceeds tolerance")]
    NotUnitary(f64),

    #[error("eigenvalue {0:.3e} is negative beyond tolerance")]
    NegativeEigenvalue(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid qubit cut: {0}")]
    InvalidCut(String),

    #[error("entropic index q = {q} outside {allowed}")]
    QOutOfRange { q: f64, allowed: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
