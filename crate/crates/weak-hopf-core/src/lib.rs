//! Finite-dimensional weak Kac and weak C*-Hopf algebras given by structure
//! tensors over a multimatrix algebra.

pub mod axioms;
pub mod cartan;
pub mod connected;
pub mod data;
pub mod dual;
pub mod error;
pub mod generators;
pub mod haar;

pub use axioms::{verify_axioms, AxiomReport, Classification};
pub use cartan::{cartan_subalgebras, CartanPair};
pub use connected::{connectedness, Connectedness};
pub use data::{Involution, WeakHopfData};
pub use dual::{double_dual_residual, dual_algebra, DualHopf};
pub use error::{HopfError, Result};
pub use generators::{function_algebra, group_algebra, pair_groupoid, FiniteGroup, GroupAlgebra};
pub use haar::{haar, haar_functional, haar_projection, HaarData};
