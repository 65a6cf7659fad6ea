//! Dense finite-dimensional C*-algebras: multimatrix algebras, traces,
//! conditional expectations, commutants, inclusion matrices and the basic
//! construction.

pub mod algebra;
pub mod basic;
pub mod decompose;
pub mod embedding;
pub mod error;
pub mod expectation;
pub mod inclusion;
pub mod linalg;
pub mod report;
pub mod trace;

pub use algebra::{Element, MultiMatrixAlgebra, TensorProduct};
pub use basic::{basic_construction, JonesExtension};
pub use decompose::decompose_subalgebra;
pub use embedding::{center, center_of, relative_commutant, SubalgebraEmbedding};
pub use error::{AlgebraError, Result};
pub use expectation::{conditional_expectation, Expectation};
pub use inclusion::{inclusion_matrix, markov_trace, InclusionMatrix};
pub use linalg::{Matrix, Vector, C64};
pub use report::{Check, Report};
pub use trace::{watatani_index, TraceState};

/// Numerical settings shared by every operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    /// Relative tolerance used for residual checks and rank decisions.
    pub tol: f64,
    /// Seed for the random elements used in block decompositions.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { tol: 1e-9, seed: 0 }
    }
}

impl Config {
    pub fn with_tol(tol: f64) -> Self {
        Config { tol, ..Config::default() }
    }
}
