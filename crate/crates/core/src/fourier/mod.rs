//! Spectral toolbox: FFT, dual-representation periodic functions, lifted
//! torus embeddings, and the two cohomological-equation solvers that power
//! the Newton step.

pub mod curve;
pub mod cx;
pub mod fft;
pub mod periodic;

pub use curve::LiftedCurve;
pub use cx::Cx;
pub use fft::{forward, signed_freq, synthesize};
pub use periodic::{cohomology_lambda, cohomology_zero_avg, Periodic};
