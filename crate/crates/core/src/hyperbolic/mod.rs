//! Gromov-hyperbolic primitives over finite metric trees and the hyperboloid model.

pub mod approx_tree;
pub mod hyperboloid;
pub mod lemmas;
pub mod sampling;
pub mod space;
pub mod tree;

pub use approx_tree::{approximation_tree, ApproxTree, Distortion};
pub use hyperboloid::{lorentz, Geodesic, Hyperboloid};
pub use lemmas::{verify_canoeing, verify_segment_lemma, LemmaId, LemmaVerdict, SegmentConfig, DEFAULT_SAMPLES};
pub use sampling::Sampler;
pub use space::{HypPoint, MetricSpaceBackend};
pub use tree::{FiniteTree, TreePoint};
