//! Khovanov homology and the Jones polynomial through spanning trees of the
//! Tait graph, the spanning-tree filtration and its spectral sequence, and
//! mutation tests through colored graphic matroids.

pub mod algebra;
pub mod diagram;
pub mod error;
pub mod fixtures;
pub mod khovanov;
pub mod matroid;
pub mod poly;
pub mod random;
pub mod tree_complex;
pub mod trees;
pub mod verify;

pub use error::{Error, Result};
