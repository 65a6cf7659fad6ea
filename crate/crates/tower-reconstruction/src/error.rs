use fd_star_algebra::AlgebraError;
use thiserror::Error;
use weak_hopf_core::HopfError;

#[derive(Debug, Error)]
pub enum TowerError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate pairing (condition number {0:.3e})")]
    DegeneratePairing(f64),
    #[error("cross-check failed: {formula} (residual {residual:.3e})")]
    CrossCheck { formula: String, residual: f64 },
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("deformation input violates the twisted bundle: {0}")]
    Bundle(String),
    #[error("deformed structure fails the axioms: {0}")]
    Axioms(String),
    #[error("element is not a positive invertible central element of the target subalgebra: {0}")]
    BadCanonicalElement(String),
}

pub type Result<T> = std::result::Result<T, TowerError>;
