//! Numerical kernels shared by the field, elasticity and boundary modules.

mod diff;
mod fit;
mod quad;

pub use diff::{derivative, mixed_partial, partial, DiffConfig};
pub use fit::{fit_singular_limit, fit_singular_series, LimitEstimate};
pub use quad::{
    integrate_1d, integrate_1d_with_breaks, integrate_2d, BoundingBox, QuadConfig, QuadEstimate,
    Region2,
};
