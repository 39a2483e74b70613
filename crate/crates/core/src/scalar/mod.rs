//! Exact quadratic-field numbers, certified reals, and the glue between them.

pub mod ball;
pub mod quad;
pub mod rational;
pub mod real;

pub use ball::{acosh_hp, certify_sign, embed, HPReal, DEFAULT_PRECISION, PRECISION_LADDER};
pub use quad::{golden_eigenvalue, quad_arith, quad_compare, QuadOp, QuadScalar};
pub use rational::Rational;
pub use real::Real;
