//! Analysis toolkit for boolean bent functions.
//!
//! Truth tables use the index convention `index(x) = x_1 + 2 x_2 + ... +
//! 2^{n-1} x_n`. See [`function`] for the representation, [`transforms`] for
//! the Walsh-Hadamard and Möbius transforms, and [`census`] / [`bounds`] for
//! the counting side.

pub mod bent;
pub mod bounds;
pub mod census;
pub mod cli;
pub mod error;
pub mod function;
pub mod geometry;
pub mod math;
pub mod reconstruct;
pub mod transforms;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use function::{BooleanFunction, Point};
pub use geometry::{Ball, FaceMask};
pub use transforms::{IntegerVector, WalshSpectrum};
