//! Robin-Laplacian spectra, nodal domains and spectral inequalities on
//! planar model domains.

// `!(x > 0.0)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod error;
pub mod fem;
pub mod asymmetry;
pub mod bounds;
pub mod geometry;
pub mod nodal;
pub mod polygon;
pub mod special;
pub mod spectra;

pub use error::{Error, Result};
