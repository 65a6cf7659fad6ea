use fd_star_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HopfError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("Haar projection system degenerate ({0})")]
    HaarProjection(String),
    #[error("Haar functional system degenerate ({0})")]
    HaarFunctional(String),
    #[error("Haar functional not positive (min eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("counital image is not a subalgebra: {0}")]
    Cartan(String),
    #[error("invalid multiplication table: {0}")]
    InvalidGroup(String),
    #[error("connectedness criteria disagree: {0}")]
    Connectedness(String),
}

pub type Result<T> = std::result::Result<T, HopfError>;
