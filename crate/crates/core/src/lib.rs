//! Numerical laboratory for multilinear fractional integrals.
//!
//! The crate evaluates multilinear fractional integral operators and their
//! sum- and product-type commutators with Lipschitz symbols, estimates
//! weighted Lipschitz seminorms over ball families, and computes per-ball
//! brackets of the two-weight class `H_m(p, beta, delta_tilde)` together with
//! the multilinear `A_{p,q}`, reverse Hölder and doubling quantities.
//!
//! Infinite quantities are ordinary `f64::INFINITY` values, never errors.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod lipschitz;
pub mod numeric;
pub mod operators;
pub mod params;
pub mod weights;

pub use error::{Error, Result};
pub use geometry::{Ball, BallFamily};
pub use params::{ExponentVector, NontrivialCase, ParameterPoint, RegionClass};
pub use weights::{WeightSpec, WeightVector};
