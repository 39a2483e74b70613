//! Exact computations around the Picard-Manin space of the plane.
pub mod error;
pub mod cremona;
pub mod hyperbolic;
pub mod lattices;
pub mod linalg;
pub mod picard_manin;
pub mod scalar;
pub mod tightness;
pub use error::{Error, Result};
