//! VC-dimension bounds and explicit shattering witnesses for 1NN classifiers
//! with a fixed number of prototypes.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod classifier;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod verification;

pub use classifier::{classify, realizes, Label, LabeledPrototypeSet, Labeling};
pub use error::{Error, Result};
pub use geometry::Point;
