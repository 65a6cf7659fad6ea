use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("invalid block sizes: {0}")]
    InvalidBlocks(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate trace")]
    DegenerateTrace,
    #[error("zero weight in trace")]
    ZeroWeight,
    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("embedding not unital")]
    NotUnital,
    #[error("inclusion not connected")]
    NotConnected,
    #[error("trace not Markov (residual {0:.3e})")]
    NotMarkov(f64),
    #[error("extended trace inconsistent (residual {0:.3e})")]
    ExtendedTrace(f64),
    #[error("block decomposition failed: {0}")]
    Decomposition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
