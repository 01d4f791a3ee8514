//! Exact sparse linear algebra over abstract, totally ordered basis keys.

#[cfg(any(test, feature = "oracle"))]
pub mod dense;
mod echelon;
mod sparse;

pub use echelon::{kernel, EchelonBasis};
pub use sparse::SparseVec;
