//! Plane elastostatics on a lens bounded by two circles tangent at the origin.
//!
//! The displacement is tangent to the one-parameter family of circles through
//! the cusp. A real Airy potential yields an equilibrium stress, and matching it
//! to the strain through an isotropic law gives position-dependent Lame
//! parameters. [`boundary`] integrates tractions and strain energy over the lens
//! with a small ball about the cusp removed and extrapolates as the ball shrinks.

pub mod error;
pub mod boundary;
pub mod elasticity;
pub mod fields;
pub mod geometry;
pub mod numerics;

pub use error::{Error, Result};
