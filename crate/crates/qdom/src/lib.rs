//! Exact kernel for distance spaces over the extended nonnegative rationals.
//!
//! A distance space is a finite set of points with a `[0, inf]`-valued
//! distance matrix satisfying the triangle inequality. From that single
//! structure the crate derives hemimetrics, order relations, finite
//! topologies, way-below distances, Hausdorff hyperspaces, formal balls and
//! several completions — all with exact rational arithmetic — and ships a
//! harness that verifies the theory's equational claims on finite instances.

pub mod catalog;
pub mod continuity;
pub mod extval;
pub mod formalballs;
pub mod grel;
pub mod harness;
pub mod hyperspace;
pub mod space;
pub mod spacefile;
pub mod topology;

pub use extval::ExtVal;
pub use grel::GRel;
pub use space::DistanceSpace;
