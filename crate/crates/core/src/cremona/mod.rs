//! Symbolic actions of Cremona transformations on the Picard-Manin space.

pub mod action;
pub mod axis;
pub mod formula;
pub mod growth;
pub mod identity;
pub mod monomial;
pub mod stability;

pub use action::{CremonaAction, Variant};
pub use axis::{axis_truncation, AxisData};
pub use formula::{Expr, RationalMap};
pub use growth::{classify_isometry, dynamical_degree, spectral_radius, Growth, IsometryClass, Lambda, DEFAULT_HORIZON};
pub use identity::{rational_map_identity_check, Generators, IdentityVerdict, Word};
pub use monomial::{monomial_commutator, monomial_degree};
pub use stability::{stability_check, CollisionData, StabilityVerdict, Violation};
