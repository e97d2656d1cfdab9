//! Zonal and Jack polynomial machinery for exact evaluation and Monte Carlo
//! verification of averaged products of characteristic polynomials of
//! complex symmetric, complex self-dual, Ginibre and spherical random
//! matrix ensembles.

pub mod charpoly_mc;
pub mod ensembles;
pub mod error;
pub mod jack;
pub mod linalg;
pub mod partitions;
pub mod special_functions;
pub mod scalar;
pub mod stats;

pub use error::{Result, ZonalError};
pub use num_complex::Complex64;
pub use partitions::Partition;
