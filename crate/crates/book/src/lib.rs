//! Guide chapters, compiled so their listings run as doc-tests.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/numbers.md")]
pub mod numbers {}

#[doc = include_str!("../../../book/src/classes.md")]
pub mod classes {}

#[doc = include_str!("../../../book/src/dynamics.md")]
pub mod dynamics {}

#[doc = include_str!("../../../book/src/lattices.md")]
pub mod lattices {}

#[doc = include_str!("../../../book/src/hyperbolic.md")]
pub mod hyperbolic {}

#[doc = include_str!("../../../book/src/tightness.md")]
pub mod tightness {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
