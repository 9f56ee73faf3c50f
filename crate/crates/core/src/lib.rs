//! K-expectile clustering.
//!
//! Partitional clustering where each cluster center is a per-dimension
//! expectile instead of a mean, with cost measured by the asymmetric
//! τ-distance. Includes a K-means baseline, synthetic benchmark generators,
//! validation indices, and PPM image segmentation helpers.

// `!(x > 0.0)` is used on purpose so NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmark;
pub mod clustering;
pub mod error;
pub mod expectile;
pub mod io;
pub mod matrix;
pub mod metrics;
pub mod segment;
pub mod simgen;

pub use error::{Error, Result};
pub use matrix::DataMatrix;
