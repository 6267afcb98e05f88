//! Tractions, resultant force and couple, and strain energy on the punctured
//! lens, together with their behaviour as the puncture radius `a` shrinks.
//!
//! Orientation conventions:
//!
//! * Force and couple resultants over the circles are signed `theta`
//!   integrals of the circle-normal traction. The outer circle is traversed
//!   from `A` to `B` (clockwise), the inner from `C` to `D` (anticlockwise),
//!   with `ds = c d(2 theta)`. `T2a` and `Gamma_a` are minus the sum of the two
//!   arcs, which equals the resultant of `sigma e_r` over the ball arcs.
//! * Energies are flux integrals `u . sigma n ds` with the region's outward
//!   normal and positive arc length on every arc, as the divergence theorem
//!   requires. Their sum is `2 E_a`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::elasticity::{stress, MaterialPoint};
use crate::error::{Error, Result};
use crate::fields::{displacement_on_circle, strain};
use crate::geometry::{circle_normal, BoundaryArc, LensDomain, Point2, PuncturedLens};
use crate::numerics::{fit_singular_series, integrate_1d, integrate_2d, LimitEstimate, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TractionSample {
    pub f1: f64,
    pub f2: f64,
}

fn check_open_angle(theta: f64) -> Result<()> {
    if !(theta.abs() < PI / 2.0) {
        return Err(Error::singular(format!(
            "traction undefined at the cusp (theta = {theta})"
        )));
    }
    Ok(())
}

fn check_circle(c: f64, k: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::input(format!("c must be positive, got {c}")));
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::input(format!("k must be non-negative, got {k}")));
    }
    Ok(())
}

/// Traction `sigma n` across the circle `c` with `n = (cos 2 theta, sin 2 theta)`.
pub fn traction(c: f64, theta: f64, k: f64) -> Result<TractionSample> {
    check_circle(c, k)?;
    check_open_angle(theta)?;
    let cos = theta.cos();
    let r2 = 4.0 * c * c * cos * cos;
    let (s2, c2) = (2.0 * theta).sin_cos();
    Ok(TractionSample {
        f1: -4.0 * theta * c2,
        f2: -4.0 * theta * s2 + 2.0 * (1.0 + k / r2),
    })
}

/// Same traction assembled from the stress tensor and the circle normal.
pub fn traction_from_stress(c: f64, theta: f64, k: f64) -> Result<TractionSample> {
    check_circle(c, k)?;
    check_open_angle(theta)?;
    let cos = theta.cos();
    let p = Point2::new(2.0 * c * cos * cos, c * (2.0 * theta).sin());
    let s = stress(&MaterialPoint::new(p, k)?);
    let [f1, f2] = s.apply(circle_normal(theta));
    Ok(TractionSample { f1, f2 })
}

/// Anticlockwise moment `x1 F2 - x2 F1` of the circle traction about the origin.
pub fn moment_density(c: f64, theta: f64, k: f64) -> Result<f64> {
    check_circle(c, k)?;
    check_open_angle(theta)?;
    let s2 = (2.0 * theta).sin();
    let c2 = (2.0 * theta).cos();
    Ok(-4.0 * c * theta * s2 + 2.0 * c * (1.0 + c2) + k / c)
}

/// Quadrature value beside an independent closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralReport {
    pub quadrature_value: f64,
    pub closed_form_value: Option<f64>,
    pub abs_difference: Option<f64>,
}

impl IntegralReport {
    pub fn new(quadrature_value: f64, closed_form_value: Option<f64>) -> Self {
        Self {
            quadrature_value,
            closed_form_value,
            abs_difference: closed_form_value.map(|c| (quadrature_value - c).abs()),
        }
    }
}

/// Signed integral of `f(theta) ds/dtheta` from `theta_start` to `theta_end`.
fn arc_integral<F>(arc: &BoundaryArc, f: F, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure = std::cell::Cell::new(None::<Error>);
    let scale = arc.ds_dtheta();
    let g = |t: f64| match f(t) {
        Ok(v) => v * scale,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    let v = integrate_1d(g, arc.theta_start, arc.theta_end, cfg);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    v
}

/// Flux integral `f ds` with positive arc length.
fn arc_flux<F>(arc: &BoundaryArc, f: F, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let signed = arc_integral(arc, f, cfg)?;
    Ok(if arc.theta_end < arc.theta_start {
        -signed
    } else {
        signed
    })
}

/// Ball angles `theta_A`, `theta_D` and the arcs of the punctured lens.
struct Punctured {
    c1: f64,
    c2: f64,
    k: f64,
    theta_a: f64,
    theta_d: f64,
    arcs: [BoundaryArc; 4],
}

impl Punctured {
    fn new(domain: &LensDomain, a: f64) -> Result<Self> {
        let arcs = domain.punctured_boundary(a)?;
        Ok(Self {
            c1: domain.outer,
            c2: domain.inner,
            k: domain.k,
            theta_a: arcs[0].theta_start,
            theta_d: arcs[1].theta_end,
            arcs,
        })
    }
}

/// `int_{theta_A}^{theta_B} F2 c1 d(2 theta)` in closed form.
pub fn outer_force_closed_form(c1: f64, k: f64, theta_a: f64) -> f64 {
    let t = theta_a;
    -8.0 * c1 * t * (2.0 * t).cos() + 4.0 * c1 * (2.0 * t).sin() - 8.0 * c1 * t
        - 2.0 * k / c1 * t.tan()
}

/// `int_{theta_C}^{theta_D} F2 c2 d(2 theta)` in closed form.
pub fn inner_force_closed_form(c2: f64, k: f64, theta_d: f64) -> f64 {
    let t = theta_d;
    8.0 * c2 * t * (2.0 * t).cos() - 4.0 * c2 * (2.0 * t).sin() + 8.0 * c2 * t
        + 2.0 * k / c2 * t.tan()
}

/// Resultant `T2a` written out term by term.
pub fn resultant_force_closed_form(c1: f64, c2: f64, k: f64, theta_a: f64, theta_d: f64) -> f64 {
    let (ta, td) = (theta_a, theta_d);
    -8.0 * (c2 * td * (2.0 * td).cos() - c1 * ta * (2.0 * ta).cos())
        - 4.0 * (c1 * (2.0 * ta).sin() - c2 * (2.0 * td).sin())
        - 8.0 * (c2 * td - c1 * ta)
        - 2.0 * k * (td.tan() / c2 - ta.tan() / c1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceReport {
    pub a: f64,
    pub t1: IntegralReport,
    pub t2: IntegralReport,
    pub outer_f2: IntegralReport,
    pub inner_f2: IntegralReport,
    /// `T2a` from `sigma e_r` integrated over the two ball arcs.
    pub ball_t2: f64,
}

fn ball_traction(a: f64, theta: f64, k: f64) -> Result<[f64; 2]> {
    let (s, c) = theta.sin_cos();
    let mp = MaterialPoint::new(Point2::new(a * c, a * s), k)?;
    Ok(stress(&mp).apply([c, s]))
}

pub fn total_force(domain: &LensDomain, a: f64, cfg: &QuadConfig) -> Result<ForceReport> {
    let p = Punctured::new(domain, a)?;
    let [outer, inner, up, down] = &p.arcs;
    let k = p.k;
    let f1_outer = arc_integral(outer, |t| Ok(traction(p.c1, t, k)?.f1), cfg)?;
    let f1_inner = arc_integral(inner, |t| Ok(traction(p.c2, t, k)?.f1), cfg)?;
    let f2_outer = arc_integral(outer, |t| Ok(traction(p.c1, t, k)?.f2), cfg)?;
    let f2_inner = arc_integral(inner, |t| Ok(traction(p.c2, t, k)?.f2), cfg)?;
    let ball = |arc: &BoundaryArc| arc_integral(arc, |t| Ok(ball_traction(a, t, k)?[1]), cfg);
    let ball_t2 = ball(up)? + ball(down)?;

    Ok(ForceReport {
        a,
        t1: IntegralReport::new(-(f1_outer + f1_inner), Some(0.0)),
        t2: IntegralReport::new(
            -(f2_outer + f2_inner),
            Some(resultant_force_closed_form(p.c1, p.c2, k, p.theta_a, p.theta_d)),
        ),
        outer_f2: IntegralReport::new(f2_outer, Some(outer_force_closed_form(p.c1, k, p.theta_a))),
        inner_f2: IntegralReport::new(f2_inner, Some(inner_force_closed_form(p.c2, k, p.theta_d))),
        ball_t2,
    })
}

/// Moment of the circle traction over the outer arc, `A` to `B`.
pub fn outer_moment_closed_form(c1: f64, k: f64, theta_a: f64) -> f64 {
    let t = theta_a;
    -8.0 * c1 * c1 * t * (2.0 * t).cos() - 4.0 * (k + 2.0 * c1 * c1) * t
}

/// Moment of the circle traction over the inner arc, `C` to `D`.
pub fn inner_moment_closed_form(c2: f64, k: f64, theta_d: f64) -> f64 {
    let t = theta_d;
    8.0 * c2 * c2 * t * (2.0 * t).cos() + 4.0 * (k + 2.0 * c2 * c2) * t
}

/// `Gamma_a = 4 (a^2 + k)(theta_A - theta_D)`, the two arc forms combined using
/// `cos 2 theta_A = a^2 / (2 c1^2) - 1`.
pub fn reduced_moment_closed_form(a: f64, k: f64, theta_a: f64, theta_d: f64) -> f64 {
    4.0 * (a * a + k) * (theta_a - theta_d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub a: f64,
    pub gamma: IntegralReport,
    pub outer: IntegralReport,
    pub inner: IntegralReport,
    /// `Gamma_a` from the moment of `sigma e_r` over the ball arcs.
    pub ball_gamma: f64,
    pub reduced_closed_form: f64,
}

pub fn total_moment(domain: &LensDomain, a: f64, cfg: &QuadConfig) -> Result<MomentReport> {
    let p = Punctured::new(domain, a)?;
    let [outer, inner, up, down] = &p.arcs;
    let k = p.k;
    let m_outer = arc_integral(outer, |t| moment_density(p.c1, t, k), cfg)?;
    let m_inner = arc_integral(inner, |t| moment_density(p.c2, t, k), cfg)?;
    let ball = |arc: &BoundaryArc| {
        arc_integral(
            arc,
            |t| {
                let [f1, f2] = ball_traction(a, t, k)?;
                Ok(a * t.cos() * f2 - a * t.sin() * f1)
            },
            cfg,
        )
    };
    let closed_outer = outer_moment_closed_form(p.c1, k, p.theta_a);
    let closed_inner = inner_moment_closed_form(p.c2, k, p.theta_d);
    Ok(MomentReport {
        a,
        gamma: IntegralReport::new(-(m_outer + m_inner), Some(-(closed_outer + closed_inner))),
        outer: IntegralReport::new(m_outer, Some(closed_outer)),
        inner: IntegralReport::new(m_inner, Some(closed_inner)),
        ball_gamma: ball(up)? + ball(down)?,
        reduced_closed_form: reduced_moment_closed_form(a, k, p.theta_a, p.theta_d),
    })
}

/// Closed forms of the arc energies `V1`, `V2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcEnergyForms {
    pub v1: f64,
    pub v2: f64,
}

/// Flux integrals over the outer and inner arcs with outward normals:
/// `V1 = -4 c1^2 sin 2 theta_A - 4 k theta_A + 2 k tan theta_A`,
/// `V2 = 4 c2^2 sin 2 theta_D + 4 k theta_D - 2 k tan theta_D`.
pub fn arc_energy_closed_forms(c1: f64, c2: f64, k: f64, theta_a: f64, theta_d: f64) -> ArcEnergyForms {
    let (ta, td) = (theta_a, theta_d);
    ArcEnergyForms {
        v1: -4.0 * c1 * c1 * (2.0 * ta).sin() - 4.0 * k * ta + 2.0 * k * ta.tan(),
        v2: 4.0 * c2 * c2 * (2.0 * td).sin() + 4.0 * k * td - 2.0 * k * td.tan(),
    }
}

/// Variant of [`arc_energy_closed_forms`] with the opposite sign on the `c^2`
/// terms:
/// `V1 = 4 c1^2 sin 2 theta_A - 4 k theta_A + 2 k tan theta_A`,
/// `V2 = -4 c2^2 sin 2 theta_D + 4 k theta_D - 2 k tan theta_D`.
///
/// This equals `int cos 2 theta (1 - k / r^2)`-type integrands rather than the
/// flux of `u . sigma n`, and no choice of arc orientation reproduces it when
/// `k > 0`. It differs from the flux forms by `8 c^2 sin 2 theta`, which is
/// `O(a)`, so the two agree only in the limit. Kept for comparison.
pub fn mixed_sign_arc_energy_forms(
    c1: f64,
    c2: f64,
    k: f64,
    theta_a: f64,
    theta_d: f64,
) -> ArcEnergyForms {
    let (ta, td) = (theta_a, theta_d);
    ArcEnergyForms {
        v1: 4.0 * c1 * c1 * (2.0 * ta).sin() - 4.0 * k * ta + 2.0 * k * ta.tan(),
        v2: -4.0 * c2 * c2 * (2.0 * td).sin() + 4.0 * k * td - 2.0 * k * td.tan(),
    }
}

/// `u . sigma n` on the circle `c` with the circle normal `(cos 2 theta, sin 2 theta)`.
pub fn circle_energy_flux(c: f64, theta: f64, k: f64) -> Result<f64> {
    let u = displacement_on_circle(c, theta)?;
    let t = traction(c, theta, k)?;
    Ok(u.u1 * t.f1 + u.u2 * t.f2)
}

/// `u . sigma n` on the ball of radius `a` with the outward normal `-e_r`:
/// `2 a theta tan(theta) + a + k / a`.
pub fn ball_energy_flux(a: f64, theta: f64, k: f64) -> Result<f64> {
    check_open_angle(theta)?;
    Ok(2.0 * a * theta * theta.tan() + a + k / a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyDecomposition {
    pub a: f64,
    pub v1: f64,
    pub v2: f64,
    pub w1: f64,
    pub w2: f64,
    /// `V1 + V2 + W1 + W2 = 2 E_a`.
    pub total: f64,
    /// `E_a = total / 2`.
    pub energy: f64,
    pub closed_forms: ArcEnergyForms,
    pub mixed_sign_forms: ArcEnergyForms,
}

pub fn boundary_energy(domain: &LensDomain, a: f64, cfg: &QuadConfig) -> Result<EnergyDecomposition> {
    let p = Punctured::new(domain, a)?;
    let [outer, inner, up, down] = &p.arcs;
    let k = p.k;
    let v1 = arc_flux(outer, |t| circle_energy_flux(p.c1, t, k), cfg)?;
    // the inner arc's outward normal is minus the circle normal
    let v2 = -arc_flux(inner, |t| circle_energy_flux(p.c2, t, k), cfg)?;
    let w1 = arc_flux(up, |t| ball_energy_flux(a, t, k), cfg)?;
    let w2 = arc_flux(down, |t| ball_energy_flux(a, t, k), cfg)?;
    let total = v1 + v2 + w1 + w2;
    Ok(EnergyDecomposition {
        a,
        v1,
        v2,
        w1,
        w2,
        total,
        energy: 0.5 * total,
        closed_forms: arc_energy_closed_forms(p.c1, p.c2, k, p.theta_a, p.theta_d),
        mixed_sign_forms: mixed_sign_arc_energy_forms(p.c1, p.c2, k, p.theta_a, p.theta_d),
    })
}

/// `sigma : e` at a point.
pub fn energy_density(point: Point2, k: f64) -> Result<f64> {
    let mp = MaterialPoint::new(point, k)?;
    Ok(stress(&mp).contract(&strain(point)?))
}

/// `E_a` as half the area integral of `sigma : e` over the punctured lens.
pub fn area_energy(domain: &LensDomain, a: f64, cfg: &QuadConfig) -> Result<f64> {
    let region = PuncturedLens::new(domain, a)?;
    let k = domain.k;
    let density = |x1: f64, x2: f64| {
        let r2 = x1 * x1 + x2 * x2;
        -4.0 * x2.atan2(x1) * x2 / x1 + (r2 + k) / (x1 * x1)
    };
    Ok(0.5 * integrate_2d(density, &region, cfg)?)
}

/// `start * 2^-n` for `n = 0..count`.
pub fn geometric_radii(start: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && start.is_finite()) {
        return Err(Error::input(format!("start radius must be positive, got {start}")));
    }
    Ok((0..count).map(|n| start * 0.5f64.powi(n as i32)).collect())
}

pub fn default_radii() -> Vec<f64> {
    (0..7).map(|n| 0.4 * 0.5f64.powi(n)).collect()
}

/// Regular powers of `a` appended to the `A/a + B` model when extrapolating.
pub const LIMIT_REGULAR_TERMS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitRow {
    pub a: f64,
    pub t1: f64,
    pub t2a: f64,
    pub gamma_a: f64,
    pub energy: f64,
    pub a_times_energy: f64,
    pub theta_a: f64,
    /// `tan(theta_A) - 2 c1 / a`.
    pub tan_theta_a_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub inner: f64,
    pub outer: f64,
    pub k: f64,
    pub rows: Vec<LimitRow>,
    pub t1_max_abs: f64,
    pub t2_fit: LimitEstimate,
    pub gamma_fit: LimitEstimate,
    pub energy_fit: LimitEstimate,
    /// `2 k (c1 - c2)`, the singular coefficient implied by the arc energies.
    pub energy_coeff_expected: f64,
    /// `4 (c1^2 - c2^2) pi`, a value sometimes quoted for the limiting couple.
    pub gamma_quoted: f64,
    /// Extrapolated couple minus the quoted value.
    pub gamma_difference: f64,
}

pub fn limit_row(domain: &LensDomain, a: f64, cfg: &QuadConfig) -> Result<LimitRow> {
    let force = total_force(domain, a, cfg)?;
    let moment = total_moment(domain, a, cfg)?;
    let energy = boundary_energy(domain, a, cfg)?;
    let theta_a = domain.intersection_points(a)?.theta_a;
    Ok(LimitRow {
        a,
        t1: force.t1.quadrature_value,
        t2a: force.t2.quadrature_value,
        gamma_a: moment.gamma.quadrature_value,
        energy: energy.energy,
        a_times_energy: a * energy.energy,
        theta_a,
        tan_theta_a_excess: theta_a.tan() - 2.0 * domain.outer / a,
    })
}

pub fn limit_report(domain: &LensDomain, radii: &[f64], cfg: &QuadConfig) -> Result<LimitReport> {
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::input("radii must be strictly decreasing"));
    }
    if radii.iter().any(|&a| !(a > 1e-6)) {
        return Err(Error::input("every radius must exceed 1e-6"));
    }
    let rows = radii
        .par_iter()
        .map(|&a| limit_row(domain, a, cfg))
        .collect::<Result<Vec<_>>>()?;

    let regular = LIMIT_REGULAR_TERMS.min(radii.len().saturating_sub(3));
    let fit = |pick: fn(&LimitRow) -> f64| {
        let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.a, pick(r))).collect();
        fit_singular_series(&samples, regular)
    };
    let t2_fit = fit(|r| r.t2a)?;
    let gamma_fit = fit(|r| r.gamma_a)?;
    let energy_fit = fit(|r| r.energy)?;
    let (c1, c2) = (domain.outer, domain.inner);
    let gamma_quoted = 4.0 * (c1 * c1 - c2 * c2) * PI;
    Ok(LimitReport {
        inner: c2,
        outer: c1,
        k: domain.k,
        t1_max_abs: rows.iter().fold(0.0, |m, r| m.max(r.t1.abs())),
        gamma_difference: gamma_fit.constant_term - gamma_quoted,
        rows,
        t2_fit,
        gamma_fit,
        energy_fit,
        energy_coeff_expected: 2.0 * domain.k * (c1 - c2),
        gamma_quoted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_1d;
    use std::f64::consts::FRAC_PI_4;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn cfg() -> QuadConfig {
        QuadConfig::new(1e-12, 1e-12, 4000).unwrap()
    }

    #[test]
    fn traction_examples() {
        assert_eq!(traction(1.0, 0.0, 0.0).unwrap(), TractionSample { f1: 0.0, f2: 2.0 });
        let t = traction(1.0, FRAC_PI_4, 0.0).unwrap();
        assert!(close(t.f1, 0.0, 1e-15) && close(t.f2, 2.0 - PI, 1e-14));
        assert_eq!(traction(1.0, 0.0, 4.0).unwrap().f2, 4.0);
        assert!(traction(1.0, PI / 2.0, 0.0).is_err());
    }

    #[test]
    fn traction_matches_stress_assembly() {
        for &(c, t, k) in &[(1.0, 0.3, 0.0), (1.7, -1.2, 2.0), (2.0, 1.5, 5.0)] {
            let a = traction(c, t, k).unwrap();
            let b = traction_from_stress(c, t, k).unwrap();
            assert!(close(a.f1, b.f1, 1e-10) && close(a.f2, b.f2, 1e-10));
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moment_density(1.0, 0.0, 0.0).unwrap(), 4.0);
        assert_eq!(moment_density(1.0, 0.0, 2.0).unwrap(), 6.0);
        assert!(close(moment_density(2.0, FRAC_PI_4, 0.0).unwrap(), 4.0 - 2.0 * PI, 1e-14));
    }

    #[test]
    fn moment_matches_cross_product() {
        let (c, t, k) = (1.4, 0.8, 3.0);
        let f = traction(c, t, k).unwrap();
        let x1 = 2.0 * c * t.cos().powi(2);
        let x2 = c * (2.0 * t).sin();
        assert!(close(moment_density(c, t, k).unwrap(), x1 * f.f2 - x2 * f.f1, 1e-12));
    }

    #[test]
    fn force_matches_closed_form() {
        let dom = LensDomain::new(2.0, 1.0).unwrap();
        let rep = total_force(&dom, 0.5, &cfg()).unwrap();
        assert!(rep.t2.abs_difference.unwrap() < 1e-8, "{rep:?}");
        assert!(rep.outer_f2.abs_difference.unwrap() < 1e-8);
        assert!(rep.inner_f2.abs_difference.unwrap() < 1e-8);
        assert!(rep.t1.quadrature_value.abs() < 1e-10);
        assert!(close(rep.ball_t2, rep.t2.quadrature_value, 1e-8));
    }

    #[test]
    fn moment_matches_closed_forms() {
        let dom = LensDomain::new(2.0, 1.0).unwrap();
        let rep = total_moment(&dom, 0.5, &cfg()).unwrap();
        assert!(rep.outer.abs_difference.unwrap() < 1e-8);
        assert!(rep.inner.abs_difference.unwrap() < 1e-8);
        assert!(close(rep.gamma.quadrature_value, rep.reduced_closed_form, 1e-8));
        assert!(close(rep.ball_gamma, rep.gamma.quadrature_value, 1e-8));
    }

    #[test]
    fn ball_flux_matches_assembly() {
        for &(a, t, k) in &[(0.3, 0.4, 0.0), (0.1, -1.1, 2.0), (1.0, 1.3, 5.0)] {
            let p = Point2::new(a * f64::cos(t), a * f64::sin(t));
            let s = stress(&MaterialPoint::new(p, k).unwrap());
            let u = crate::fields::displacement(p).unwrap();
            let [f1, f2] = s.apply([-f64::cos(t), -f64::sin(t)]);
            let direct = u.u1 * f1 + u.u2 * f2;
            assert!(close(ball_energy_flux(a, t, k).unwrap(), direct, 1e-10 * (1.0 + direct.abs())));
        }
    }

    #[test]
    fn arc_energies_match_flux_forms() {
        for k in [0.0, 1.0, 5.0] {
            let dom = LensDomain::new(2.0, k).unwrap();
            for a in [0.05, 0.2, 0.7] {
                let e = boundary_energy(&dom, a, &cfg()).unwrap();
                assert!(close(e.v1, e.closed_forms.v1, 1e-8), "k={k} a={a} {e:?}");
                assert!(close(e.v2, e.closed_forms.v2, 1e-8), "k={k} a={a} {e:?}");
                let gap = (e.v1 - e.mixed_sign_forms.v1).abs();
                let ta = dom.intersection_points(a).unwrap().theta_a;
                assert!(close(gap, 8.0 * 4.0 * (2.0 * ta).sin(), 1e-8));
            }
        }
    }

    #[test]
    fn energy_density_polar_form() {
        let (x1, x2, k) = (0.7, -0.4, 2.0);
        let t: f64 = f64::atan2(x2, x1);
        let r2 = x1 * x1 + x2 * x2;
        let polar = -4.0 * t * t.tan() + (1.0 + k / r2) / t.cos().powi(2);
        assert!(close(energy_density(Point2::new(x1, x2), k).unwrap(), polar, 1e-12));
    }

    #[test]
    fn divergence_theorem_against_polar_oracle() {
        // iterated integral in (theta, r): r from max(a, 2 c2 cos) to 2 c1 cos
        let (c1, c2, k, a) = (2.0, 1.0, 1.0, 0.3);
        let q = cfg();
        let dom = LensDomain::new(c1, k).unwrap();
        let ta = dom.intersection_points(a).unwrap().theta_a;
        let density = |r: f64, t: f64| -4.0 * t * t.tan() + (1.0 + k / (r * r)) / t.cos().powi(2);
        let inner = |t: f64| {
            let lo = a.max(2.0 * c2 * t.cos());
            let hi = 2.0 * c1 * t.cos();
            integrate_1d(|r| density(r, t) * r, lo, hi, &q).unwrap()
        };
        let td = dom.intersection_points(a).unwrap().theta_d;
        let polar = 2.0
            * (integrate_1d(inner, 0.0, td, &q).unwrap() + integrate_1d(inner, td, ta, &q).unwrap());
        let e = boundary_energy(&dom, a, &q).unwrap();
        assert!(close(polar, e.total, 1e-8 * e.total.abs()), "{polar} vs {}", e.total);
    }

    #[test]
    fn area_energy_matches_boundary() {
        let dom = LensDomain::new(2.0, 1.0).unwrap();
        let q = QuadConfig::new(1e-9, 1e-9, 4000).unwrap();
        let area = area_energy(&dom, 0.3, &q).unwrap();
        let e = boundary_energy(&dom, 0.3, &q).unwrap();
        assert!(close(area, e.energy, 1e-6 * e.energy.abs()), "{area} vs {}", e.energy);
    }

    #[test]
    fn limits() {
        let dom = LensDomain::new(2.0, 1.0).unwrap();
        let rep = limit_report(&dom, &default_radii(), &cfg()).unwrap();
        assert!(rep.t1_max_abs < 1e-10);
        assert!(rep.t2_fit.constant_term.abs() < 1e-6, "{:?}", rep.t2_fit);
        assert!(close(rep.energy_fit.singular_coeff, 2.0, 1e-3), "{:?}", rep.energy_fit);
        assert!(rep.gamma_fit.constant_term.abs() < 1e-6, "{:?}", rep.gamma_fit);
        assert!(close(rep.gamma_quoted, 12.0 * PI, 1e-12));
        let last = rep.rows.last().unwrap();
        assert!(last.tan_theta_a_excess.abs() < last.a);
    }

    #[test]
    fn limits_without_k() {
        let dom = LensDomain::new(2.0, 0.0).unwrap();
        let rep = limit_report(&dom, &default_radii(), &cfg()).unwrap();
        assert!(rep.energy_fit.singular_coeff.abs() < 1e-6, "{:?}", rep.energy_fit);
        assert!(rep.rows.last().unwrap().a_times_energy.abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_radii() {
        let dom = LensDomain::new(2.0, 1.0).unwrap();
        assert!(matches!(total_force(&dom, 2.0, &cfg()), Err(Error::Geometry(_))));
        assert!(limit_report(&dom, &[0.1, 0.2, 0.05], &cfg()).is_err());
        assert!(limit_report(&dom, &[0.1, 0.05, 1e-7], &cfg()).is_err());
    }
}
