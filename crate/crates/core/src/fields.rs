//! The displacement field tangent to the circle family, its gradient and strain,
//! and the behaviour of the field at the cusp.
//!
//! Two evaluations are kept apart. [`displacement`] uses the free-point form
//! `u2 = (x2^2 - x1^2) / (2 x1)`, which is indeterminate at the origin.
//! [`displacement_on_circle`] uses the circle parameter and is total in `theta`,
//! so it returns a different cusp value for each circle.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{circle_of_point, CircleId, Point2, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisplacementSample {
    pub u1: f64,
    pub u2: f64,
}

impl DisplacementSample {
    pub fn norm(&self) -> f64 {
        self.u1.hypot(self.u2)
    }
}

/// Symmetric 2x2 tensor stored by its three independent components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SymTensor2 {
    pub t11: f64,
    pub t12: f64,
    pub t22: f64,
}

impl SymTensor2 {
    pub fn new(t11: f64, t12: f64, t22: f64) -> Self {
        Self { t11, t12, t22 }
    }

    pub fn trace(&self) -> f64 {
        self.t11 + self.t22
    }

    /// Full contraction `T : S`.
    pub fn contract(&self, other: &SymTensor2) -> f64 {
        self.t11 * other.t11 + 2.0 * self.t12 * other.t12 + self.t22 * other.t22
    }

    /// `T n`.
    pub fn apply(&self, n: Vec2) -> Vec2 {
        [
            self.t11 * n[0] + self.t12 * n[1],
            self.t12 * n[0] + self.t22 * n[1],
        ]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.t11 * s, self.t12 * s, self.t22 * s)
    }

    pub fn sub(&self, other: &SymTensor2) -> Self {
        Self::new(
            self.t11 - other.t11,
            self.t12 - other.t12,
            self.t22 - other.t22,
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.t11.abs().max(self.t12.abs()).max(self.t22.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientSample {
    pub du1_dx1: f64,
    pub du1_dx2: f64,
    pub du2_dx1: f64,
    pub du2_dx2: f64,
}

impl GradientSample {
    pub fn symmetrized(&self) -> SymTensor2 {
        SymTensor2::new(
            self.du1_dx1,
            0.5 * (self.du1_dx2 + self.du2_dx1),
            self.du2_dx2,
        )
    }
}

fn require_off_axis(p: Point2) -> Result<()> {
    if p.x1 == 0.0 {
        return Err(Error::singular(format!(
            "displacement is indeterminate on x1 = 0 (x2 = {})",
            p.x2
        )));
    }
    if !p.is_finite() {
        return Err(Error::input("point has non-finite coordinates"));
    }
    Ok(())
}

pub fn displacement(p: Point2) -> Result<DisplacementSample> {
    require_off_axis(p)?;
    Ok(DisplacementSample {
        u1: p.x2,
        u2: (p.x2 * p.x2 - p.x1 * p.x1) / (2.0 * p.x1),
    })
}

/// `(c sin 2 theta, -c cos 2 theta)`, defined up to and including `|theta| = pi/2`.
pub fn displacement_on_circle(c: f64, theta: f64) -> Result<DisplacementSample> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::input(format!("c must be positive, got {c}")));
    }
    if !(theta.abs() <= FRAC_PI_2) {
        return Err(Error::input(format!(
            "theta must lie in [-pi/2, pi/2], got {theta}"
        )));
    }
    let (s, co) = (2.0 * theta).sin_cos();
    Ok(DisplacementSample {
        u1: c * s,
        u2: -c * co,
    })
}

pub fn gradient(p: Point2) -> Result<GradientSample> {
    require_off_axis(p)?;
    let x1sq = p.x1 * p.x1;
    Ok(GradientSample {
        du1_dx1: 0.0,
        du1_dx2: 1.0,
        du2_dx1: -(x1sq + p.x2 * p.x2) / (2.0 * x1sq),
        du2_dx2: p.x2 / p.x1,
    })
}

pub fn strain(p: Point2) -> Result<SymTensor2> {
    require_off_axis(p)?;
    let x1sq = p.x1 * p.x1;
    Ok(SymTensor2::new(
        0.0,
        (x1sq - p.x2 * p.x2) / (4.0 * x1sq),
        p.x2 / p.x1,
    ))
}

/// Components about the circle centre `(u_rho, u_phi)` and about the origin
/// `(u_r, u_theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarComponents {
    pub u_rho: f64,
    pub u_phi: f64,
    pub u_r: f64,
    pub u_theta: f64,
}

pub fn polar_components(c: f64, theta: f64) -> Result<PolarComponents> {
    let u = displacement_on_circle(c, theta)?;
    let (s2, c2) = (2.0 * theta).sin_cos();
    let (s1, c1) = theta.sin_cos();
    let r = 2.0 * c * c1;
    Ok(PolarComponents {
        u_rho: u.u1 * c2 + u.u2 * s2,
        u_phi: -u.u1 * s2 + u.u2 * c2,
        u_r: c * s1,
        u_theta: -r + c * c1,
    })
}

/// Translation `(0, c)` and unit rotation `(x2, -x1)` summing to the field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidParts {
    pub translation: Vec2,
    pub rotation: Vec2,
}

impl RigidParts {
    pub fn total(&self) -> Vec2 {
        [
            self.translation[0] + self.rotation[0],
            self.translation[1] + self.rotation[1],
        ]
    }
}

pub fn rigid_decomposition(p: Point2) -> Result<RigidParts> {
    require_off_axis(p)?;
    let c = circle_of_point(p)?;
    Ok(RigidParts {
        translation: [0.0, c],
        rotation: [p.x2, -p.x1],
    })
}

/// Free-point `u2` sampled along the circle `c` at `theta = pi/2 - 10^-n`,
/// `n = 1..=steps`. Points are built from the complementary angle so that
/// `x1 = 2 c sin^2(eps)` keeps full relative precision.
pub fn cusp_approach(c: f64, steps: u32) -> Result<Vec<(f64, f64)>> {
    CircleId::new(c)?;
    (1..=steps)
        .map(|n| {
            let eps = 10f64.powi(-(n as i32));
            let s = eps.sin();
            let p = Point2::new(2.0 * c * s * s, c * (2.0 * eps).sin());
            Ok((eps, displacement(p)?.u2))
        })
        .collect()
}

/// Limit of `u2` at the cusp along the circle `c`, taken numerically from the
/// free-point form.
pub fn cusp_limit(c: f64) -> Result<f64> {
    let seq = cusp_approach(c, 8)?;
    Ok(seq.last().map(|s| s.1).unwrap_or(f64::NAN))
}

/// Jump in the cusp value of `u2` between the circles `c1` and `c2`.
pub fn cusp_jump(c1: f64, c2: f64) -> Result<f64> {
    Ok(cusp_limit(c1)? - cusp_limit(c2)?)
}

/// `e_rr + e_theta_theta` for the on-circle field `u = (x2, c - x1)` with `c`
/// frozen at the circle value, evaluated from its polar components
/// `u_r = c sin(theta)` and `u_theta = -r + c cos(theta)`.
///
/// Holding `c` fixed makes this the dilatation along the circle. It is not the
/// trace `x2 / x1` of the full strain, where `c` varies from point to point.
pub fn circle_dilatation(c: f64, theta: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::input(format!("c must be positive, got {c}")));
    }
    if !(theta.abs() < FRAC_PI_2) {
        return Err(Error::singular(format!(
            "r = 0 at theta = {theta}; dilatation undefined at the cusp"
        )));
    }
    let r = 2.0 * c * theta.cos();
    let dur_dr = 0.0;
    let ur_over_r = c * theta.sin() / r;
    let dutheta_dtheta = -c * theta.sin();
    Ok(dur_dr + ur_over_r + dutheta_dtheta / r)
}
