use fd_star_algebra::AlgebraError;
use thiserror::Error;
use tower_reconstruction::TowerError;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("action check failed: {name} (residual {residual:.3e})")]
    Verification { name: String, residual: f64 },
    #[error("fixed points do not form a subalgebra: {0}")]
    FixedPointsNotSubalgebra(String),
    #[error("crossed product operation not well defined: {name} (residual {residual:.3e})")]
    NotWellDefined { name: String, residual: f64 },
    #[error("theta not bijective (rank {rank} of {dim}, target dimension {target})")]
    NotBijective { rank: usize, dim: usize, target: usize },
    #[error("theta not multiplicative (residual {0:.3e})")]
    NotMultiplicative(f64),
}

pub type Result<T> = std::result::Result<T, ActionError>;

/// First failing row of a report as a verification error.
pub(crate) fn first_failure(r: &fd_star_algebra::Report) -> Option<ActionError> {
    r.failures()
        .first()
        .map(|c| ActionError::Verification { name: c.name.clone(), residual: c.residual })
}
