//! Scalar contract, multiprecision backend, and first-order jet transport.

pub mod jet;
pub mod mp;
pub mod parallel;
pub mod scalar;

pub use jet::{Element, Jet};
pub use mp::MpFloat;
pub use parallel::parallel_map;
pub use scalar::{Scalar, ScalarContext};
