//! Weak Hopf structures reconstructed from finite Jones towers: the duality
//! pairing, the coalgebra and antipode on the second relative commutant, the
//! canonical element H, the identity suite, classification, and the
//! H-deformation.

pub mod classify;
pub mod deform;
pub mod dual_bases;
pub mod error;
pub mod identities;
pub mod intertwiner;
pub mod pairing;
pub mod reconstruct;
pub mod tower;

pub use classify::{classify, kac_dichotomy, ClassifyOutcome, NON_MULTIPLICATIVITY_THRESHOLD};
pub use deform::{deform, deform_tower, structure_distance, twisted_bundle, undeform, DeformedStructure, TwistedStructure};
pub use dual_bases::{dual_bases, DualBases};
pub use error::{Result, TowerError};
pub use identities::{identity_suite, IDENTITY_NAMES};
pub use intertwiner::{find_isomorphism, morphism_residual, Isomorphism};
pub use pairing::{pair_ambient, pair_with_b, pairing, PairingForm};
pub use reconstruct::{canonical_element, reconstruct, ReconstructedStructure};
pub use tower::{build_tower, build_tower_from_group, verify_tower_premises, TowerData};
