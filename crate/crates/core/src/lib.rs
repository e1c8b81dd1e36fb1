//! Matroid tools for locally repairable codes.
//!
//! Combinatorial code (subsets, matroids, constructions, search) works on
//! `usize`. The closed-form bounds are generic over the signed integer width;
//! the aliases below fix the common choices.

pub mod bounds;
pub mod construction;
pub mod graph;
pub mod lrc;
pub mod matroid;
pub mod oracle;
pub mod perfect;
pub mod subset;

pub use bounds::{BoundInt, BoundReport, BoundsError, Branch, Hypothesis};
pub use construction::{Atom, AtomConfiguration, ConstructionError};
pub use graph::{GraphError, GraphSpec};
pub use lrc::{LocalityCertificate, LrcError, LrcParams};
pub use matroid::{Matroid, MatroidError};
pub use subset::SubsetMask;

/// Bound report over 64-bit integers.
pub type BoundReport64 = bounds::BoundReport<i64>;
/// Bound report over 128-bit integers, for very large parameters.
pub type BoundReport128 = bounds::BoundReport<i128>;
