//! Quasi-periodic invariant attractors of the dissipative spin-orbit problem.
//!
//! The library computes rotational invariant tori of the conformally
//! symplectic 2π return map of the spin-orbit equation, by a Fourier-space
//! Newton method that converges quadratically and degrades gracefully near
//! breakdown.  All numerical kernels are generic over a runtime-selectable
//! floating-point precision: hardware `f64` or arbitrary-precision MPFR
//! floats behind the same [`Scalar`] interface.
//!
//! Layout:
//! - [`arith`]: scalar abstraction, multiprecision backend, truncated-jet
//!   automatic differentiation, precision-aware parallel maps.
//! - [`model`]: the spin-orbit vector fields, Kepler geometry, averaged
//!   torque coefficients, and the analytic conformal factor.
//! - [`flow`]: Taylor-method integration, the 2π return maps and their
//!   first-order jets.
//! - [`fourier`]: FFT, periodic grid functions, lifted curves, shift and
//!   cohomology operators.
//! - [`kam`]: the Newton step and solver for invariant tori.
//! - [`seed`]: transient-orbit seeding, rotation numbers, initial torus
//!   embeddings.
//! - [`continuation`]: arc continuation in the perturbation parameter up to
//!   breakdown.

pub mod arith;
pub mod error;
pub mod flow;
pub mod fourier;
pub mod kam;
pub mod continuation;
pub mod model;
pub mod seed;

pub use arith::{Element, Jet, MpFloat, Scalar, ScalarContext};
pub use error::{Error, Result};
pub use flow::{FlowState, Model, TaylorPolicy};
pub use fourier::{LiftedCurve, Periodic};
pub use kam::{NewtonDiagnostics, TorusSolution};
pub use continuation::{ContinuationOptions, ContinuationRun};
pub use model::{KeplerState, ModelParams};
pub use seed::OrbitSample;
