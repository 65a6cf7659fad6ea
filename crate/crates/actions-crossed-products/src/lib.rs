//! Actions of weak Hopf structures on multimatrix algebras: the canonical
//! action of B on M₁ for a tower, fixed points, crossed products,
//! minimality and the isomorphism θ onto the M₂-level algebra.

pub mod action;
pub mod canonical;
pub mod crossed;
pub mod error;
pub mod minimal;
mod sample;
pub mod theta;

pub use action::{counit_action, verify_action, ActionData};
pub use canonical::{canonical_action, fixed_point_report, fixed_points, CanonicalAction};
pub use crossed::{crossed_product, BasisClass, CrossedProduct};
pub use error::{ActionError, Result};
pub use minimal::{minimality, Minimality};
pub use theta::{theta_iso, ThetaMap};
