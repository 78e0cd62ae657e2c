//! Spectral (twisted) cocycle toolkit for substitution dynamical systems.
//!
//! The library covers exact symbolic computation of return-word polynomials
//! and cocycle matrices, numeric cocycle iteration and Lyapunov spectrum
//! estimation, Mahler measures with exact zero certification, a singularity
//! classifier for two-letter substitutions, and local dimension estimation
//! for spectral measures of irrational rotations.

pub mod battery;
pub mod classify;
pub mod cocycle;
pub mod error;
pub mod lyapunov;
pub mod mahler;
pub mod poly;
pub mod roots;
pub mod rotation;
pub mod substitution;

pub use error::{Error, Result};
