//! Airy stress solution for the prescribed displacement and the
//! position-dependent Lame parameters that make it an isotropic elastic state.
//!
//! The stored potential is the real function `Phi = 2 theta (r^2 - k)`. Stress
//! follows the signed convention
//! `s11 = -Phi_22`, `s12 = Phi_12`, `s22 = -Phi_11`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{strain, SymTensor2};
use crate::geometry::{LensDomain, Point2};
use crate::numerics::{mixed_partial, partial, DiffConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialPoint {
    pub point: Point2,
    pub k: f64,
}

impl MaterialPoint {
    pub fn new(point: Point2, k: f64) -> Result<Self> {
        if !point.is_finite() {
            return Err(Error::input("point has non-finite coordinates"));
        }
        if !(point.x1 > 0.0) {
            return Err(Error::singular(format!(
                "fields are singular for x1 <= 0 (got x1 = {})",
                point.x1
            )));
        }
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::input(format!("k must be non-negative, got {k}")));
        }
        Ok(Self { point, k })
    }

    fn theta(&self) -> f64 {
        self.point.theta()
    }

    /// `1 + k / r^2`.
    fn stiffening(&self) -> f64 {
        1.0 + self.k / self.point.radius_sq()
    }
}

/// `theta cot(theta)`, continued by its series through the removable point 0.
pub fn theta_cot_theta(theta: f64) -> f64 {
    if theta.abs() < 1e-4 {
        let t2 = theta * theta;
        1.0 - t2 / 3.0 - t2 * t2 / 45.0
    } else {
        theta / theta.tan()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AirySample {
    pub value: f64,
    /// `(Phi_11, Phi_12, Phi_22)`.
    pub hessian: SymTensor2,
}

pub fn airy(mp: &MaterialPoint) -> AirySample {
    let theta = mp.theta();
    let r2 = mp.point.radius_sq();
    let g = mp.stiffening();
    let (s2, c2) = (2.0 * theta).sin_cos();
    AirySample {
        value: 2.0 * theta * (r2 - mp.k),
        hessian: SymTensor2::new(
            4.0 * theta - 2.0 * g * s2,
            2.0 * g * c2,
            4.0 * theta + 2.0 * g * s2,
        ),
    }
}

/// Potential value alone, for finite-difference checks.
pub fn airy_value(x1: f64, x2: f64, k: f64) -> f64 {
    2.0 * x2.atan2(x1) * (x1 * x1 + x2 * x2 - k)
}

/// Stress from a potential hessian `(Phi_11, Phi_12, Phi_22)`.
pub fn stress_from_hessian(h: &SymTensor2) -> SymTensor2 {
    SymTensor2::new(-h.t22, h.t12, -h.t11)
}

pub fn stress(mp: &MaterialPoint) -> SymTensor2 {
    let theta = mp.theta();
    let g = mp.stiffening();
    let (s2, c2) = (2.0 * theta).sin_cos();
    SymTensor2::new(
        -2.0 * (2.0 * theta + g * s2),
        2.0 * g * c2,
        2.0 * (-2.0 * theta + g * s2),
    )
}

/// Potential hessian by central differences of [`airy_value`].
pub fn airy_hessian_fd(mp: &MaterialPoint, cfg: &DiffConfig) -> Result<SymTensor2> {
    let k = mp.k;
    let f = |a: f64, b: f64| airy_value(a, b, k);
    let (x1, x2) = (mp.point.x1, mp.point.x2);
    Ok(SymTensor2::new(
        partial(f, x1, x2, 0, 2, cfg)?,
        mixed_partial(f, x1, x2, cfg)?,
        partial(f, x1, x2, 1, 2, cfg)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LameSample {
    pub mu: f64,
    pub lambda: f64,
    pub lambda_plus_2mu: f64,
    /// `lambda / (2 (lambda + mu))`; `None` where `lambda + mu = 0`.
    pub poisson: Option<f64>,
}

pub fn lame(mp: &MaterialPoint) -> Result<LameSample> {
    let theta = mp.theta();
    if theta.abs() >= FRAC_PI_2 {
        return Err(Error::singular("Lame parameters undefined at theta = +-pi/2"));
    }
    let cos = theta.cos();
    let mu = 4.0 * mp.stiffening() * cos * cos;
    let tct = theta_cot_theta(theta);
    let lambda = -4.0 * tct - mu;
    let lambda_plus_mu = -4.0 * tct;
    Ok(LameSample {
        mu,
        lambda,
        lambda_plus_2mu: -4.0 * tct + mu,
        poisson: (lambda_plus_mu != 0.0).then(|| lambda / (2.0 * lambda_plus_mu)),
    })
}

/// `(e11 - e22) / e12` from the strain of the prescribed field.
pub fn lambda_coefficient(p: Point2) -> Result<f64> {
    let e = strain(p)?;
    if e.t12.abs() <= 1e-14 * (1.0 + e.t22.abs()) {
        return Err(Error::Division(format!(
            "e12 vanishes at ({}, {}) where |x1| = |x2|",
            p.x1, p.x2
        )));
    }
    Ok((e.t11 - e.t22) / e.t12)
}

/// `2i (z^2 - zbar^2) / (z^2 + zbar^2)` evaluated in complex arithmetic.
/// The imaginary part is roundoff and is returned for inspection.
pub fn lambda_coefficient_complex(p: Point2) -> Result<Complex64> {
    let z = Complex64::new(p.x1, p.x2);
    let (z2, zb2) = (z * z, z.conj() * z.conj());
    let den = z2 + zb2;
    if den.norm() <= 1e-14 * z.norm_sqr() {
        return Err(Error::Division(format!(
            "z^2 + zbar^2 vanishes at ({}, {})",
            p.x1, p.x2
        )));
    }
    Ok(Complex64::new(0.0, 2.0) * (z2 - zb2) / den)
}

/// `sigma - (lambda tr(e) I + 2 mu e)`.
pub fn constitutive_residual(mp: &MaterialPoint) -> Result<SymTensor2> {
    let l = lame(mp)?;
    let e = strain(mp.point)?;
    let tr = e.trace();
    let predicted = SymTensor2::new(
        l.lambda * tr + 2.0 * l.mu * e.t11,
        2.0 * l.mu * e.t12,
        l.lambda * tr + 2.0 * l.mu * e.t22,
    );
    Ok(stress(mp).sub(&predicted))
}

/// Lame combinations recovered from stress/strain ratios. Each entry is `None`
/// where its denominator falls below `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioLame {
    /// `sigma12 / e12`.
    pub two_mu_shear: Option<f64>,
    /// `(sigma11 - sigma22) / (e11 - e22)`.
    pub two_mu_normal: Option<f64>,
    /// `(sigma11 + sigma22) / (e11 + e22)`.
    pub two_lambda_plus_mu: Option<f64>,
    /// `(sigma11 e11 - sigma22 e22) / (e11^2 - e22^2)`.
    pub lambda_plus_2mu: Option<f64>,
    /// `(sigma22 e11 - sigma11 e22) / (e11^2 - e22^2)`.
    pub lambda: Option<f64>,
}

impl RatioLame {
    pub fn mu(&self) -> Option<f64> {
        self.two_mu_shear.or(self.two_mu_normal).map(|v| 0.5 * v)
    }

    /// Largest pairwise disagreement among the identities that are defined,
    /// expressed through `mu` and `lambda`.
    pub fn max_inconsistency(&self) -> f64 {
        let mut mus = Vec::new();
        let mut lambdas = Vec::new();
        if let Some(v) = self.two_mu_shear {
            mus.push(0.5 * v);
        }
        if let Some(v) = self.two_mu_normal {
            mus.push(0.5 * v);
        }
        if let Some(l) = self.lambda {
            lambdas.push(l);
        }
        let mu_ref = mus.first().copied();
        if let (Some(lp2m), Some(mu)) = (self.lambda_plus_2mu, mu_ref) {
            lambdas.push(lp2m - 2.0 * mu);
        }
        if let (Some(tlm), Some(mu)) = (self.two_lambda_plus_mu, mu_ref) {
            lambdas.push(0.5 * tlm - mu);
        }
        let spread = |v: &[f64]| {
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if v.len() > 1 {
                hi - lo
            } else {
                0.0
            }
        };
        spread(&mus).max(spread(&lambdas))
    }
}

pub fn lame_from_ratios(stress: &SymTensor2, strain: &SymTensor2, tol: f64) -> RatioLame {
    let ratio = |num: f64, den: f64| (den.abs() > tol).then(|| num / den);
    let (s, e) = (stress, strain);
    let quad = e.t11 * e.t11 - e.t22 * e.t22;
    RatioLame {
        two_mu_shear: ratio(s.t12, e.t12),
        two_mu_normal: ratio(s.t11 - s.t22, e.t11 - e.t22),
        two_lambda_plus_mu: ratio(s.t11 + s.t22, e.t11 + e.t22),
        lambda_plus_2mu: ratio(s.t11 * e.t11 - s.t22 * e.t22, quad),
        lambda: ratio(s.t22 * e.t11 - s.t11 * e.t22, quad),
    }
}

/// Residual of a vector balance law together with the scale it is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VectorResidual {
    pub r1: f64,
    pub r2: f64,
    pub scale: f64,
}

impl VectorResidual {
    pub fn relative(&self) -> f64 {
        self.r1.hypot(self.r2) / self.scale.max(f64::MIN_POSITIVE)
    }
}

fn check_clearance(mp: &MaterialPoint) -> Result<()> {
    if mp.point.radius() <= 0.01 {
        return Err(Error::domain(format!(
            "point at r = {} is too close to the cusp for difference stencils",
            mp.point.radius()
        )));
    }
    Ok(())
}

/// Finite-difference `div sigma` of the closed-form stress, scaled by the local
/// stress magnitude.
pub fn equilibrium_residual(mp: &MaterialPoint, cfg: &DiffConfig) -> Result<VectorResidual> {
    check_clearance(mp)?;
    let k = mp.k;
    let comp = move |which: usize| {
        move |a: f64, b: f64| {
            let s = stress(&MaterialPoint {
                point: Point2::new(a, b),
                k,
            });
            match which {
                0 => s.t11,
                1 => s.t12,
                _ => s.t22,
            }
        }
    };
    let (x1, x2) = (mp.point.x1, mp.point.x2);
    let d = |which: usize, axis: usize| partial(comp(which), x1, x2, axis, 1, cfg);
    let r1 = d(0, 0)? + d(1, 1)?;
    let r2 = d(1, 0)? + d(2, 1)?;
    Ok(VectorResidual {
        r1,
        r2,
        scale: stress(mp).max_abs(),
    })
}

/// Residual of the nonhomogeneous Navier equations
/// `mu u_a,bb + (lambda + mu) u_b,ba + lambda_,a u_b,b + mu_,b (u_a,b + u_b,a)`,
/// with every derivative of `u`, `lambda` and `mu` taken by finite differences.
/// The scale is the sum of the term magnitudes.
pub fn navier_residual(mp: &MaterialPoint, cfg: &DiffConfig) -> Result<VectorResidual> {
    check_clearance(mp)?;
    let k = mp.k;
    let (x1, x2) = (mp.point.x1, mp.point.x2);
    let u1 = |_a: f64, b: f64| b;
    let u2 = |a: f64, b: f64| (b * b - a * a) / (2.0 * a);
    let lame_at = move |a: f64, b: f64| {
        lame(&MaterialPoint {
            point: Point2::new(a, b),
            k,
        })
    };
    let mu_f = |a: f64, b: f64| lame_at(a, b).map(|l| l.mu).unwrap_or(f64::NAN);
    let lam_f = |a: f64, b: f64| lame_at(a, b).map(|l| l.lambda).unwrap_or(f64::NAN);

    let grad = |f: &dyn Fn(f64, f64) -> f64| -> Result<[f64; 2]> {
        Ok([
            partial(f, x1, x2, 0, 1, cfg)?,
            partial(f, x1, x2, 1, 1, cfg)?,
        ])
    };
    let grads = [grad(&u1)?, grad(&u2)?];
    let lap = |f: &dyn Fn(f64, f64) -> f64| -> Result<f64> {
        Ok(partial(f, x1, x2, 0, 2, cfg)? + partial(f, x1, x2, 1, 2, cfg)?)
    };
    let lap_u = [lap(&u1)?, lap(&u2)?];
    // grad(div u) = (u1,11 + u2,21, u1,12 + u2,22)
    let ddiv = [
        partial(u1, x1, x2, 0, 2, cfg)? + mixed_partial(u2, x1, x2, cfg)?,
        mixed_partial(u1, x1, x2, cfg)? + partial(u2, x1, x2, 1, 2, cfg)?,
    ];
    let div_u = grads[0][0] + grads[1][1];
    let dmu = grad(&mu_f)?;
    let dlam = grad(&lam_f)?;
    let l = lame(mp)?;

    let mut r = [0.0; 2];
    let mut scale = 0.0f64;
    for a in 0..2 {
        let mut terms = vec![
            l.mu * lap_u[a],
            (l.lambda + l.mu) * ddiv[a],
            dlam[a] * div_u,
        ];
        for b in 0..2 {
            terms.push(dmu[b] * (grads[a][b] + grads[b][a]));
        }
        r[a] = terms.iter().sum();
        scale = scale.max(terms.iter().map(|t| t.abs()).sum());
    }
    Ok(VectorResidual {
        r1: r[0],
        r2: r[1],
        scale,
    })
}

/// `Phi_11 - Phi_22 - Lambda Phi_12` from the analytic hessian, divided by the
/// largest of the three terms.
pub fn airy_pde_residual(mp: &MaterialPoint) -> Result<f64> {
    let lam = lambda_coefficient(mp.point)?;
    let h = airy(mp).hessian;
    let terms = [h.t11, -h.t22, -lam * h.t12];
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let sum: f64 = terms.iter().sum();
    Ok(if scale > 0.0 { sum / scale } else { 0.0 })
}

/// `lambda + 2 mu` on the circle `c` at angle `theta`:
/// `4 cos^2(theta) - 4 theta cot(theta) + k / c^2`.
pub fn ellipticity_margin(c: f64, theta: f64, k: f64) -> f64 {
    let cos = theta.cos();
    4.0 * cos * cos - 4.0 * theta_cot_theta(theta) + k / (c * c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticityScan {
    pub k: f64,
    pub grid_c: usize,
    pub grid_theta: usize,
    pub min_margin: f64,
    pub argmin: Point2,
    pub argmin_c: f64,
    pub argmin_theta: f64,
    /// Smallest `k` (to within `1e-6`) making every grid margin positive.
    pub k_threshold: f64,
    /// Smallest `mu` on the grid.
    pub min_mu: f64,
}

fn scan_axes(domain: &LensDomain, grid: usize) -> (Vec<f64>, Vec<f64>) {
    let cs = (0..grid)
        .map(|i| domain.inner + (domain.outer - domain.inner) * i as f64 / (grid - 1) as f64)
        .collect();
    // open interval: the endpoints +-pi/2 are the cusp
    let thetas = (0..grid)
        .map(|j| -FRAC_PI_2 + std::f64::consts::PI * (j + 1) as f64 / (grid + 1) as f64)
        .collect();
    (cs, thetas)
}

type Candidate = (f64, usize, usize);

fn better(a: Candidate, b: Candidate) -> Candidate {
    // ties resolved towards smaller c, then smaller theta
    match a.0.partial_cmp(&b.0) {
        Some(std::cmp::Ordering::Less) => a,
        Some(std::cmp::Ordering::Greater) => b,
        _ => {
            if (a.1, a.2) <= (b.1, b.2) {
                a
            } else {
                b
            }
        }
    }
}

fn grid_min<F>(cs: &[f64], thetas: &[f64], f: F) -> Candidate
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    (0..cs.len() * thetas.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / thetas.len(), idx % thetas.len());
            (f(cs[i], thetas[j]), i, j)
        })
        .reduce(|| (f64::INFINITY, usize::MAX, usize::MAX), better)
}

/// Minimum of `lambda + 2 mu` over an `grid x grid` lattice in `(c, theta)`,
/// the `k` needed to make it positive, and the minimum of `mu`.
pub fn ellipticity_scan(domain: &LensDomain, grid: usize) -> Result<EllipticityScan> {
    if grid < 32 {
        return Err(Error::input(format!("ellipticity grid must be at least 32, got {grid}")));
    }
    let k = domain.k;
    let (cs, thetas) = scan_axes(domain, grid);
    let (min_margin, i, j) = grid_min(&cs, &thetas, |c, t| ellipticity_margin(c, t, k));
    let (mu_min, _, _) = grid_min(&cs, &thetas, |c, t| {
        let cos = t.cos();
        let r2 = 4.0 * c * c * cos * cos;
        4.0 * (1.0 + k / r2) * cos * cos
    });

    // margin is increasing in k, so bisect on the k-free part of the grid minimum
    let margin_at = |kk: f64| grid_min(&cs, &thetas, |c, t| ellipticity_margin(c, t, kk)).0;
    let mut lo = 0.0;
    let mut hi = 1.0;
    if margin_at(lo) > 0.0 {
        hi = 0.0;
    } else {
        while margin_at(hi) <= 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::input("no finite k makes the grid margin positive"));
            }
        }
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if margin_at(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    let (c, t) = (cs[i], thetas[j]);
    let cos = t.cos();
    Ok(EllipticityScan {
        k,
        grid_c: cs.len(),
        grid_theta: thetas.len(),
        min_margin,
        argmin: Point2::new(2.0 * c * cos * cos, c * (2.0 * t).sin()),
        argmin_c: c,
        argmin_theta: t,
        k_threshold: hi,
        min_mu: mu_min,
    })
}

/// `sum_{j=1..m} (z w)^j / j! + k` for independent complex `z`, `w`.
pub fn general_j_complex(z: Complex64, w: Complex64, m: u32, k: f64) -> Complex64 {
    let zw = z * w;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(k, 0.0);
    for j in 1..=m {
        term = term * zw / j as f64;
        sum += term;
    }
    sum
}

/// `J` at `z = x1 + i x2`, `w = conj(z)`, where it reduces to a real series in `r^2`.
pub fn general_j(p: Point2, m: u32, k: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::input("m must be a positive integer"));
    }
    let z = Complex64::new(p.x1, p.x2);
    Ok(general_j_complex(z, z.conj(), m, k).re)
}

fn binomial(n: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `order`-th derivative in `z` at fixed `w` by the central difference
/// `h^-n sum_j (-1)^j C(n, j) f(z + (n/2 - j) h)`.
pub fn general_j_z_derivative(
    z: Complex64,
    w: Complex64,
    m: u32,
    k: f64,
    order: u32,
    h: f64,
) -> Complex64 {
    let half = order as f64 / 2.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=order {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let shift = Complex64::new((half - j as f64) * h, 0.0);
        acc += general_j_complex(z + shift, w, m, k) * (sign * binomial(order, j));
    }
    acc / h.powi(order as i32)
}

/// Magnitude of the `(m+1)`-th `z`-derivative of `J` at `z = 1 + i`, `w = conj(z)`.
/// The step is `cfg.base_step^(1/(m+1))`, the usual balance for an order-`(m+1)`
/// difference.
pub fn general_j_derivative_check(m: u32, k: f64, cfg: &DiffConfig) -> Result<f64> {
    cfg.validate()?;
    if m == 0 {
        return Err(Error::input("m must be a positive integer"));
    }
    let z = Complex64::new(1.0, 1.0);
    let h = cfg.base_step.powf(1.0 / (m + 1) as f64);
    Ok(general_j_z_derivative(z, z.conj(), m, k, m + 1, h).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn mp(x1: f64, x2: f64, k: f64) -> MaterialPoint {
        MaterialPoint::new(Point2::new(x1, x2), k).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn airy_values() {
        assert_eq!(airy(&mp(2.0, 0.0, 0.0)).value, 0.0);
        assert!(close(airy(&mp(1.0, 1.0, 0.0)).value, PI, 1e-15));
        assert!(close(airy(&mp(1.0, 1.0, 2.0)).value, 0.0, 1e-15));
    }

    #[test]
    fn stress_examples() {
        let s = stress(&mp(2.0, 0.0, 0.0));
        assert_eq!((s.t11, s.t12, s.t22), (0.0, 2.0, 0.0));
        let s = stress(&mp(1.0, 1.0, 0.0));
        assert!(close(s.t11, -(PI + 2.0), 1e-14));
        assert!(close(s.t12, 0.0, 1e-15));
        assert!(close(s.t22, 2.0 - PI, 1e-14));
        assert_eq!(stress(&mp(2.0, 0.0, 4.0)).t12, 4.0);
    }

    #[test]
    fn hessian_recovers_stress() {
        for &(x1, x2, k) in &[(1.0, 0.5, 0.0), (0.3, -1.1, 5.0), (2.5, 0.2, 1.0)] {
            let m = mp(x1, x2, k);
            let s = stress_from_hessian(&airy(&m).hessian);
            assert!(s.sub(&stress(&m)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn lame_examples() {
        let l = lame(&mp(1.0, 1.0, 0.0)).unwrap();
        assert!(close(l.mu, 2.0, 1e-14));
        assert!(close(l.lambda, -(PI + 2.0), 1e-14));
        assert!(close(l.lambda_plus_2mu, 2.0 - PI, 1e-14));
        assert!(close(lame(&mp(1.0, 1.0, 1.0)).unwrap().mu, 3.0, 1e-14));
        let l = lame(&mp(2.0, 0.0, 0.0)).unwrap();
        assert_eq!((l.mu, l.lambda, l.lambda_plus_2mu), (4.0, -8.0, 0.0));
        assert_eq!(l.poisson, Some(1.0));
    }

    #[test]
    fn theta_cot_series_is_continuous() {
        let t = 0.999_999e-4;
        assert!(close(theta_cot_theta(t), t / t.tan(), 1e-15));
        assert_eq!(theta_cot_theta(0.0), 1.0);
        assert!(close(theta_cot_theta(FRAC_PI_4), FRAC_PI_4, 1e-15));
    }

    #[test]
    fn lambda_examples() {
        assert!(close(lambda_coefficient(Point2::new(1.0, 0.5)).unwrap(), -8.0 / 3.0, 1e-14));
        assert_eq!(lambda_coefficient(Point2::new(2.0, 0.0)).unwrap(), 0.0);
        assert!(matches!(
            lambda_coefficient(Point2::new(1.0, 1.0)),
            Err(Error::Division(_))
        ));
        let z = lambda_coefficient_complex(Point2::new(1.0, 0.5)).unwrap();
        assert!(close(z.re, -8.0 / 3.0, 1e-14) && z.im.abs() < 1e-15);
    }

    #[test]
    fn constitutive_closure() {
        for &(x1, x2, k) in &[(1.0, 1.0, 0.0), (2.0, 0.0, 0.0), (1.0, 0.5, 3.0)] {
            assert!(constitutive_residual(&mp(x1, x2, k)).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn ratio_identities() {
        let m = mp(1.0, 0.5, 0.0);
        let r = lame_from_ratios(&stress(&m), &strain(m.point).unwrap(), 1e-8);
        let l = lame(&m).unwrap();
        assert!(close(r.mu().unwrap(), l.mu, 1e-12));
        assert!(close(r.lambda.unwrap(), l.lambda, 1e-12));
        assert!(close(r.lambda_plus_2mu.unwrap(), l.lambda_plus_2mu, 1e-12));
        assert!(r.max_inconsistency() < 1e-12);

        let none = lame_from_ratios(
            &SymTensor2::new(1.0, 1.0, 1.0),
            &SymTensor2::new(0.0, 0.0, 1.0),
            1e-8,
        );
        assert!(none.two_mu_shear.is_none());

        let direct = lame_from_ratios(
            &SymTensor2::new(0.0, 2.0, 0.0),
            &SymTensor2::new(0.0, 0.25, 0.0),
            1e-8,
        );
        assert_eq!(direct.two_mu_shear, Some(8.0));
    }

    #[test]
    fn equilibrium_examples() {
        let cfg = DiffConfig::default();
        for &(x1, x2, k) in &[(1.0, 0.5, 0.0), (3.0, 1.0, 5.0), (0.5, 0.86, 1.0)] {
            let r = equilibrium_residual(&mp(x1, x2, k), &cfg).unwrap();
            assert!(r.relative() < 1e-6, "{r:?}");
        }
        assert!(equilibrium_residual(&mp(0.005, 0.0, 0.0), &cfg).is_err());
    }

    #[test]
    fn navier_examples() {
        let cfg = DiffConfig::default();
        for &(x1, x2, k) in &[(1.0, 0.5, 0.0), (3.0, 1.0, 5.0), (0.5, 0.86, 1.0)] {
            let r = navier_residual(&mp(x1, x2, k), &cfg).unwrap();
            assert!(r.relative() < 1e-4, "{r:?}");
        }
    }

    #[test]
    fn airy_pde_examples() {
        assert!(airy_pde_residual(&mp(1.0, 0.5, 0.0)).unwrap().abs() < 1e-12);
        assert!(airy_pde_residual(&mp(2.0, 1.0, 7.0)).unwrap().abs() < 1e-12);
        assert!(airy_pde_residual(&mp(1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn ellipticity_k_zero() {
        let dom = LensDomain::new(2.0, 0.0).unwrap();
        let scan = ellipticity_scan(&dom, 64).unwrap();
        assert!(scan.min_margin < 0.0);
        assert!(scan.k_threshold > 0.0 && scan.k_threshold.is_finite());
        assert!(scan.min_mu > 0.0);
        // with k = 0 the margin is independent of c and the tie goes to c = 1
        assert_eq!(scan.argmin_c, 1.0);

        let above = LensDomain::new(2.0, scan.k_threshold + 0.01).unwrap();
        assert!(ellipticity_scan(&above, 64).unwrap().min_margin > 0.0);
        assert!(ellipticity_margin(1.0, 1e-6, 0.0).abs() < 1e-10);
    }

    #[test]
    fn ellipticity_large_k() {
        let dom = LensDomain::new(1.5, 100.0).unwrap();
        let scan = ellipticity_scan(&dom, 32).unwrap();
        assert!(scan.min_margin > 0.0);
        // k / c^2 is weakest on the outer circle
        assert_eq!(scan.argmin_c, 1.5);
        assert!(ellipticity_scan(&dom, 16).is_err());
    }

    #[test]
    fn general_j_values() {
        assert!(close(general_j(Point2::new(1.0, 1.0), 1, 0.0).unwrap(), 2.0, 1e-15));
        assert!(close(general_j(Point2::new(1.0, 0.0), 2, 1.0).unwrap(), 2.5, 1e-15));
        assert!(general_j(Point2::new(1.0, 0.0), 0, 1.0).is_err());
    }

    #[test]
    fn general_j_derivatives() {
        let cfg = DiffConfig::default();
        for m in 1..=3 {
            assert!(general_j_derivative_check(m, 1.0, &cfg).unwrap() <= 1e-4);
        }
        // the m-th derivative is w^m, so the check is not trivially zero
        let z = Complex64::new(1.0, 1.0);
        let d = general_j_z_derivative(z, z.conj(), 2, 0.0, 2, 1e-3);
        assert!((d - z.conj() * z.conj()).norm() < 1e-5);
    }
}
