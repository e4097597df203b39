//! Regularised random walks on finite graphs: spectra, eigenvalue
//! interlacing under edge removal, tree splitting, return-probability bounds
//! and percolation cluster sampling.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod interlacing;
pub mod linalg;
pub mod par;
pub mod percolation;
pub mod rng;
pub mod spectral;
pub mod trees;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeSet, FiniteGraph};
pub use spectral::{Order, Spectrum};
