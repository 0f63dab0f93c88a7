//! Exact Fourier-Jacobi and product expansions of Borcherds forms at
//! one-dimensional cusps of orthogonal modular varieties.

pub mod borcherds;
pub mod error;
pub mod exactmath;
pub mod lattice;
pub mod modforms;
pub mod weyl;

pub use error::{Error, Result};
