//! Circles tangent at the origin, the lens between two of them, and the
//! punctured lens obtained by removing a small ball around the cusp.
//!
//! Every member of the family has centre `(c, 0)` and radius `c`, so on the
//! member through a point the polar description is `r = 2 c cos(theta)` and the
//! angle about the centre is `phi = 2 theta`. Angles measured from the origin
//! are restricted to `(-pi/2, pi/2)`: the lens lies in the closed right
//! half-plane and points with `x1 < 0` are rejected rather than wrapped.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{BoundingBox, Region2};

/// Absolute tolerance on `psi_c - 1` for boundary membership.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// Tolerance on `psi_c - 1` accepted by [`unit_tangent`].
pub const ON_CIRCLE_TOL: f64 = 1e-8;

pub type Vec2 = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x1: 0.0, x2: 0.0 };

    pub fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn is_cusp(&self) -> bool {
        self.x1 == 0.0 && self.x2 == 0.0
    }

    pub fn radius(&self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn radius_sq(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2
    }

    /// Polar angle from the origin. Only meaningful for `x1 >= 0`.
    pub fn theta(&self) -> f64 {
        self.x2.atan2(self.x1)
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

/// Polar coordinates about the centre of the family member through a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentredPolar {
    pub rho: f64,
    pub phi: f64,
}

/// Member of the circle family: radius `c`, centre `(c + d, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleId {
    pub c: f64,
    pub d: f64,
}

impl CircleId {
    pub fn new(c: f64) -> Result<Self> {
        Self::with_offset(c, 0.0)
    }

    pub fn with_offset(c: f64, d: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::input(format!("circle radius must be positive, got {c}")));
        }
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::input(format!("circle offset must be non-negative, got {d}")));
        }
        Ok(Self { c, d })
    }

    pub fn centre(&self) -> Point2 {
        Point2::new(self.c + self.d, 0.0)
    }

    /// `psi_c(p)`; equal to 1 on the circle.
    pub fn psi(&self, p: Point2) -> f64 {
        let dx = p.x1 - self.c - self.d;
        (dx * dx + p.x2 * p.x2) / (self.c * self.c)
    }

    /// Point at half-angle `theta` about the centre, i.e. centre angle `2 theta`.
    ///
    /// For `d = 0` this is the point with polar angle `theta` from the origin, and
    /// `|theta| = pi/2` returns the cusp exactly.
    pub fn point_at(&self, theta: f64) -> Result<Point2> {
        if !(theta.abs() <= FRAC_PI_2) {
            return Err(Error::input(format!(
                "theta must lie in [-pi/2, pi/2], got {theta}"
            )));
        }
        if self.d == 0.0 && theta.abs() == FRAC_PI_2 {
            return Ok(Point2::ORIGIN);
        }
        let cos = theta.cos();
        Ok(Point2::new(
            2.0 * self.c * cos * cos + self.d,
            self.c * (2.0 * theta).sin(),
        ))
    }
}

/// Parameter `c` of the family member through `p`: `c = |p|^2 / (2 x1)`.
pub fn circle_of_point(p: Point2) -> Result<f64> {
    if !(p.x1 > 0.0) {
        return Err(Error::domain(format!(
            "x1 = {} is not positive; the axis x1 = 0 meets the family only at the cusp",
            p.x1
        )));
    }
    Ok(p.radius_sq() / (2.0 * p.x1))
}

/// `(r, theta)` about the origin and `(rho, phi)` about the centre of the
/// member through `p`.
pub fn polar_maps(p: Point2) -> Result<(PolarPoint, CentredPolar)> {
    let c = circle_of_point(p)?;
    let polar = PolarPoint {
        r: p.radius(),
        theta: p.theta(),
    };
    let centred = CentredPolar {
        rho: (p.x1 - c).hypot(p.x2),
        phi: p.x2.atan2(p.x1 - c),
    };
    Ok((polar, centred))
}

/// Unit tangent to `circle` at `p`: `(x2 / c, (c + d - x1) / c)`.
pub fn unit_tangent(circle: CircleId, p: Point2) -> Result<Vec2> {
    let off = circle.psi(p) - 1.0;
    if !(off.abs() <= ON_CIRCLE_TOL) {
        return Err(Error::input(format!(
            "point ({}, {}) is off the circle c = {} (psi - 1 = {off:e})",
            p.x1, p.x2, circle.c
        )));
    }
    Ok([p.x2 / circle.c, (circle.c + circle.d - p.x1) / circle.c])
}

/// Outward normal of the circle `c` itself at polar angle `theta`:
/// `((x1 - c) / c, x2 / c) = (cos 2 theta, sin 2 theta)`.
pub fn circle_normal(theta: f64) -> Vec2 {
    [(2.0 * theta).cos(), (2.0 * theta).sin()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Interior,
    InnerBoundary,
    OuterBoundary,
    Exterior,
    Cusp,
}

/// Lens between the inner circle `c = inner` and the outer circle `c = outer`,
/// carrying the material constant `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LensDomain {
    pub inner: f64,
    pub outer: f64,
    pub k: f64,
}

impl LensDomain {
    /// Lens with inner circle `c = 1` and outer circle `c = r_outer`.
    pub fn new(r_outer: f64, k: f64) -> Result<Self> {
        if !(r_outer > 1.0 && r_outer.is_finite()) {
            return Err(Error::input(format!("R must exceed 1, got {r_outer}")));
        }
        Self::between(1.0, r_outer, k)
    }

    /// Sub-lens between the members `c2 < c1`.
    pub fn between(c2: f64, c1: f64, k: f64) -> Result<Self> {
        if !(c2 > 0.0 && c1 > c2 && c1.is_finite()) {
            return Err(Error::input(format!(
                "need 0 < inner < outer, got inner = {c2}, outer = {c1}"
            )));
        }
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::input(format!("k must be non-negative, got {k}")));
        }
        Ok(Self {
            inner: c2,
            outer: c1,
            k,
        })
    }

    pub fn classify(&self, p: Point2) -> Classification {
        if p.is_cusp() {
            return Classification::Cusp;
        }
        if !(p.x1 > 0.0) || !p.is_finite() {
            return Classification::Exterior;
        }
        let inner = CircleId {
            c: self.inner,
            d: 0.0,
        };
        let outer = CircleId {
            c: self.outer,
            d: 0.0,
        };
        if (inner.psi(p) - 1.0).abs() <= BOUNDARY_TOL {
            return Classification::InnerBoundary;
        }
        if (outer.psi(p) - 1.0).abs() <= BOUNDARY_TOL {
            return Classification::OuterBoundary;
        }
        match circle_of_point(p) {
            Ok(c) if c > self.inner && c < self.outer => Classification::Interior,
            _ => Classification::Exterior,
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        !matches!(self.classify(p), Classification::Exterior)
    }

    pub fn intersection_points(&self, a: f64) -> Result<IntersectionSet> {
        intersection_points(self.outer, self.inner, a)
    }

    /// The four arcs bounding the lens with the ball `|x| <= a` removed.
    pub fn punctured_boundary(&self, a: f64) -> Result<[BoundaryArc; 4]> {
        if !(a > 0.0 && a < 2.0 * self.inner) {
            return Err(Error::geometry(format!(
                "puncture radius must lie in (0, {}), got {a}",
                2.0 * self.inner
            )));
        }
        let ix = self.intersection_points(a)?;
        Ok([
            BoundaryArc {
                kind: ArcKind::OuterCircle,
                radius: self.outer,
                theta_start: ix.theta_a,
                theta_end: ix.theta_b,
                orientation: Orientation::Clockwise,
            },
            BoundaryArc {
                kind: ArcKind::InnerCircle,
                radius: self.inner,
                theta_start: ix.theta_c,
                theta_end: ix.theta_d,
                orientation: Orientation::Anticlockwise,
            },
            BoundaryArc {
                kind: ArcKind::BallUpper,
                radius: a,
                theta_start: ix.theta_d,
                theta_end: ix.theta_a,
                orientation: Orientation::Anticlockwise,
            },
            BoundaryArc {
                kind: ArcKind::BallLower,
                radius: a,
                theta_start: ix.theta_b,
                theta_end: ix.theta_c,
                orientation: Orientation::Anticlockwise,
            },
        ])
    }
}

/// Points where the sphere `|x| = a` crosses the outer circle (`A` above, `B`
/// below) and the inner circle (`D` above, `C` below).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntersectionSet {
    pub a: Point2,
    pub b: Point2,
    pub c: Point2,
    pub d: Point2,
    pub theta_a: f64,
    pub theta_b: f64,
    pub theta_c: f64,
    pub theta_d: f64,
}

fn upper_crossing(c: f64, a: f64) -> (Point2, f64) {
    let root = ((2.0 * c - a) * (2.0 * c + a)).max(0.0).sqrt();
    let p = Point2::new(a * a / (2.0 * c), a * root / (2.0 * c));
    (p, root.atan2(a))
}

pub fn intersection_points(c1: f64, c2: f64, a: f64) -> Result<IntersectionSet> {
    if !(c2 > 0.0 && c1 >= c2) {
        return Err(Error::input(format!(
            "need 0 < c2 <= c1, got c2 = {c2}, c1 = {c1}"
        )));
    }
    if !(a > 0.0) {
        return Err(Error::input(format!("puncture radius must be positive, got {a}")));
    }
    if a > 2.0 * c2 {
        return Err(Error::geometry(format!(
            "ball radius {a} exceeds the inner diameter {}",
            2.0 * c2
        )));
    }
    let (pa, theta_a) = upper_crossing(c1, a);
    let (pd, theta_d) = upper_crossing(c2, a);
    Ok(IntersectionSet {
        a: pa,
        b: Point2::new(pa.x1, -pa.x2),
        c: Point2::new(pd.x1, -pd.x2),
        d: pd,
        theta_a,
        theta_b: -theta_a,
        theta_c: -theta_d,
        theta_d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcKind {
    OuterCircle,
    InnerCircle,
    BallUpper,
    BallLower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Clockwise,
    Anticlockwise,
}

/// Arc of the punctured boundary parameterised by the polar angle `theta`.
///
/// `theta_start -> theta_end` follows the traversal direction used by the
/// closed-form resultants: the outer circle clockwise from `A` to `B`, the inner
/// circle and both ball arcs anticlockwise. `radius` is `c` for circle arcs and
/// the puncture radius `a` for ball arcs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryArc {
    pub kind: ArcKind,
    pub radius: f64,
    pub theta_start: f64,
    pub theta_end: f64,
    pub orientation: Orientation,
}

impl BoundaryArc {
    pub fn theta_range(&self) -> (f64, f64) {
        (
            self.theta_start.min(self.theta_end),
            self.theta_start.max(self.theta_end),
        )
    }

    fn check_theta(&self, theta: f64) -> Result<()> {
        let (lo, hi) = self.theta_range();
        let slack = 1e-12 * (1.0 + hi.abs().max(lo.abs()));
        if theta < lo - slack || theta > hi + slack || theta.is_nan() {
            return Err(Error::input(format!(
                "theta = {theta} outside arc range [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    pub fn is_circle(&self) -> bool {
        matches!(self.kind, ArcKind::OuterCircle | ArcKind::InnerCircle)
    }

    pub fn point(&self, theta: f64) -> Result<Point2> {
        self.check_theta(theta)?;
        if self.is_circle() {
            CircleId::new(self.radius)?.point_at(theta)
        } else {
            Ok(Point2::new(
                self.radius * theta.cos(),
                self.radius * theta.sin(),
            ))
        }
    }

    /// Arc length per unit `theta`: `2 c` on circles, `a` on the ball.
    pub fn ds_dtheta(&self) -> f64 {
        if self.is_circle() {
            2.0 * self.radius
        } else {
            self.radius
        }
    }

    /// Unit normal pointing out of the punctured region.
    pub fn outward_normal(&self, theta: f64) -> Result<Vec2> {
        self.check_theta(theta)?;
        Ok(match self.kind {
            ArcKind::OuterCircle => circle_normal(theta),
            ArcKind::InnerCircle => {
                let [n1, n2] = circle_normal(theta);
                [-n1, -n2]
            }
            ArcKind::BallUpper | ArcKind::BallLower => [-theta.cos(), -theta.sin()],
        })
    }
}

pub fn outward_normal(arc: &BoundaryArc, theta: f64) -> Result<Vec2> {
    arc.outward_normal(theta)
}

/// The lens between `inner` and `outer` with the closed ball `|x| <= a` removed.
///
/// Cross-sections in `x1` are exact: `x2^2` ranges over
/// `(max(2 x1 inner - x1^2, a^2 - x1^2, 0), 2 x1 outer - x1^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PuncturedLens {
    pub inner: f64,
    pub outer: f64,
    pub a: f64,
}

impl PuncturedLens {
    pub fn new(domain: &LensDomain, a: f64) -> Result<Self> {
        domain.punctured_boundary(a)?;
        Ok(Self {
            inner: domain.inner,
            outer: domain.outer,
            a,
        })
    }

    fn bounds_sq(&self, x1: f64) -> (f64, f64) {
        let lo = (2.0 * x1 * self.inner - x1 * x1)
            .max(self.a * self.a - x1 * x1)
            .max(0.0);
        (lo, 2.0 * x1 * self.outer - x1 * x1)
    }
}

impl Region2 for PuncturedLens {
    fn contains(&self, x1: f64, x2: f64) -> bool {
        let (lo, hi) = self.bounds_sq(x1);
        let y = x2 * x2;
        x1 > 0.0 && y >= lo && y <= hi
    }

    fn bounding_box(&self) -> BoundingBox {
        BoundingBox {
            x1_min: self.a * self.a / (2.0 * self.outer),
            x1_max: 2.0 * self.outer,
            x2_min: -self.outer,
            x2_max: self.outer,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        let a2 = self.a * self.a;
        vec![a2 / (2.0 * self.inner), self.a, 2.0 * self.inner]
    }

    fn section(&self, x1: f64) -> Vec<(f64, f64)> {
        let (lo, hi) = self.bounds_sq(x1);
        if !(hi > lo) {
            return Vec::new();
        }
        let top = hi.sqrt();
        if lo == 0.0 {
            vec![(-top, top)]
        } else {
            let bottom = lo.sqrt();
            vec![(-top, -bottom), (bottom, top)]
        }
    }
}
