//! Explicit solution operators for boundary value problems of
//! `div A_k grad U = 0` in the upper half plane, where
//! `A_k = [[1, k sgn x], [-k sgn x, 1]]` jumps across the vertical axis.
//!
//! The crate is generic over the real scalar type (`f32`/`f64`); the aliases
//! below fix `f64`, which is what the verification suite uses.

pub mod config;
pub mod operators;
pub mod solver;
pub mod error;
pub mod quadrature;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Scalar, Vec2};

pub type ProblemConfig = config::ProblemConfig<f64>;
pub type PVQuadratureScheme = quadrature::PVQuadratureScheme<f64>;
