//! The invariant suites behind `lensfield verify`.

use std::f64::consts::FRAC_PI_2;

use lensfield::boundary::{
    arc_energy_closed_forms, boundary_energy, inner_moment_closed_form, moment_density,
    outer_moment_closed_form, resultant_force_closed_form, total_force, total_moment, traction,
    traction_from_stress,
};
use lensfield::elasticity::{
    airy, airy_hessian_fd, constitutive_residual, ellipticity_scan, equilibrium_residual,
    general_j_derivative_check, lambda_coefficient, lambda_coefficient_complex, lame_from_ratios,
    navier_residual, stress, stress_from_hessian, MaterialPoint,
};
use lensfield::fields::{circle_dilatation, cusp_jump, cusp_limit, displacement, strain};
use lensfield::geometry::{unit_tangent, CircleId, LensDomain, Point2};
use lensfield::numerics::{DiffConfig, QuadConfig};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{Cell, Check, Report, Status, Table};
use crate::CliError;

pub const NAVIER_MIN_X1: f64 = 0.1;

pub const FINITE_RADII: [f64; 4] = [0.05, 0.1, 0.2, 0.4];

/// `(c, theta)` pairs on an `n x n` grid: `c` spans `[1, r]` inclusive,
/// `theta` stays strictly inside `(-pi/2, pi/2)`.
pub fn circle_grid(r: f64, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let c = if n == 1 { 1.0 } else { 1.0 + (r - 1.0) * i as f64 / (n - 1) as f64 };
        for j in 0..n {
            let theta = -FRAC_PI_2 + std::f64::consts::PI * (j + 1) as f64 / (n + 1) as f64;
            out.push((c, theta));
        }
    }
    out
}

fn point(c: f64, theta: f64) -> lensfield::Result<Point2> {
    CircleId::new(c)?.point_at(theta)
}

fn max_of(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m, v| if v.is_nan() || v > m { v } else { m })
}

/// Points of the grid far enough from the cusp for finite differences.
fn away_from_cusp(grid: &[(f64, f64)]) -> Vec<(f64, f64)> {
    grid.iter().copied().filter(|&(c, t)| 2.0 * c * t.cos() > 0.05).collect()
}

pub fn field_checks(cfg: &RunConfig) -> lensfield::Result<Vec<Check>> {
    let grid = circle_grid(cfg.r, cfg.grid);
    let mut checks = Vec::new();

    let mut norm_err: f64 = 0.0;
    let mut tangent_err: f64 = 0.0;
    for &(c, t) in &grid {
        let p = point(c, t)?;
        let u = displacement(p)?;
        let tan = unit_tangent(CircleId::new(c)?, p)?;
        norm_err = norm_err.max((u.norm() - c).abs());
        tangent_err = tangent_err.max((u.u1 - c * tan[0]).abs().max((u.u2 - c * tan[1]).abs()));
    }
    checks.push(Check::bound("displacement magnitude equals c", "displacement tangent to its circle", norm_err, 1e-10));
    checks.push(Check::bound("displacement equals c times unit tangent", "displacement tangent to its circle", tangent_err, 1e-10));

    let cs: Vec<f64> = (0..cfg.grid.min(16)).map(|i| 1.0 + (cfg.r - 1.0) * i as f64 / (cfg.grid.min(16) - 1) as f64).collect();
    let mut limit_err: f64 = 0.0;
    for &c in &cs {
        limit_err = limit_err.max((cusp_limit(c)? - c).abs());
    }
    checks.push(Check::bound("cusp limit along each circle equals c", "limit of the displacement at the cusp", limit_err, 1e-6));
    checks.push(Check::close("cusp jump between bounding circles", "jump of the displacement at the cusp", cusp_jump(cfg.r, 1.0)?, cfg.r - 1.0, 1e-6));

    let dil = max_of(
        grid.iter()
            .filter(|(_, t)| t.abs() <= FRAC_PI_2 - 1e-3)
            .map(|&(c, t)| circle_dilatation(c, t).map(f64::abs).unwrap_or(f64::NAN)),
    );
    checks.push(Check::bound("dilatation along circles", "isochoric along each circle", dil, 1e-10));
    Ok(checks)
}

pub fn elasticity_checks(cfg: &RunConfig) -> lensfield::Result<Vec<Check>> {
    let grid = away_from_cusp(&circle_grid(cfg.r, cfg.grid));
    let diff = DiffConfig::default();
    let mut airy_exact: f64 = 0.0;
    let mut airy_fd: f64 = 0.0;
    let mut equilibrium: f64 = 0.0;
    let mut navier: f64 = 0.0;
    let mut closure: f64 = 0.0;
    let mut ratios: f64 = 0.0;
    let mut duality: f64 = 0.0;
    for &(c, t) in &grid {
        let p = point(c, t)?;
        let mp = MaterialPoint::new(p, cfg.k)?;
        let s = stress(&mp);
        let scale = s.max_abs().max(1.0);
        airy_exact = airy_exact.max(stress_from_hessian(&airy(&mp).hessian).sub(&s).max_abs() / scale);
        airy_fd = airy_fd.max(stress_from_hessian(&airy_hessian_fd(&mp, &diff)?).sub(&s).max_abs() / scale);
        equilibrium = equilibrium.max(equilibrium_residual(&mp, &diff)?.relative());
        // u2 ~ 1/x1, so the second-difference stencil needs room on the x1 side
        if p.x1 > NAVIER_MIN_X1 {
            navier = navier.max(navier_residual(&mp, &diff)?.relative());
        }
        closure = closure.max(constitutive_residual(&mp)?.max_abs() / scale);
        let r = lame_from_ratios(&s, &strain(p)?, 1e-8);
        ratios = ratios.max(r.max_inconsistency() / scale);
        if (p.x1 * p.x1 - p.x2 * p.x2).abs() > 1e-8 * p.radius_sq() {
            let real = lambda_coefficient(p)?;
            let complex = lambda_coefficient_complex(p)?;
            let d = (real - complex.re).abs().max(complex.im.abs()) / real.abs().max(1.0);
            duality = duality.max(d);
        }
    }
    let mut checks = vec![
        Check::bound("stress from the analytic potential hessian", "stress from the Airy potential", airy_exact, 1e-10),
        Check::bound("stress from the finite-difference potential hessian", "stress from the Airy potential", airy_fd, 1e-6),
        Check::bound("equilibrium residual", "divergence-free stress", equilibrium, 1e-6),
        Check::bound("navier residual", "displacement equations with variable Lame fields", navier, 1e-6),
        Check::bound("constitutive closure", "isotropic stress-strain law", closure, 1e-10),
        Check::bound("ratio identities agree", "Lame fields from stress/strain ratios", ratios, 1e-10),
        Check::bound("Lambda coefficient real and complex forms", "strain ratio in the hyperbolic potential equation", duality, 1e-10),
    ];

    let j = [1u32, 2, 3]
        .iter()
        .map(|&m| general_j_derivative_check(m, cfg.k, &diff))
        .collect::<lensfield::Result<Vec<f64>>>()?;
    checks.push(Check::bound("generalized potential derivative check", "generalized complex potential", max_of(j.into_iter()), 1e-4));
    Ok(checks)
}

pub fn ellipticity_checks(cfg: &RunConfig) -> lensfield::Result<Vec<Check>> {
    let grid = cfg.grid.max(32);
    let scan = ellipticity_scan(&LensDomain::new(cfg.r, cfg.k)?, grid)?;
    let mut checks = vec![Check::holds("shear modulus positive", "positive shear modulus", scan.min_mu, "> 0", scan.min_mu > 0.0)];
    let thr = scan.k_threshold;
    let above = ellipticity_scan(&LensDomain::new(cfg.r, thr + 0.01)?, grid)?;
    checks.push(Check::holds(
        "margin positive just above k_threshold",
        "strong ellipticity for sufficiently large k",
        above.min_margin,
        "> 0",
        thr.is_finite() && thr >= 0.0 && above.min_margin > 0.0,
    ));
    checks.push(Check::info(
        "minimum of lambda + 2 mu at this k",
        if scan.min_margin > 0.0 { "strong ellipticity for sufficiently large k" } else { "loss of strong ellipticity at k = 0" },
        json!(scan.min_margin),
        json!(format!("k_threshold = {thr}")),
    ));
    Ok(checks)
}

pub fn traction_checks(cfg: &RunConfig) -> lensfield::Result<Vec<Check>> {
    let grid = circle_grid(cfg.r, cfg.grid.min(40));
    let mut assembled: f64 = 0.0;
    let mut odd: f64 = 0.0;
    let mut moment: f64 = 0.0;
    for &(c, t) in &grid {
        let f = traction(c, t, cfg.k)?;
        let g = traction_from_stress(c, t, cfg.k)?;
        let scale = f.f1.abs().max(f.f2.abs()).max(1.0);
        assembled = assembled.max((f.f1 - g.f1).abs().max((f.f2 - g.f2).abs()) / scale);
        let mirror = traction(c, -t, cfg.k)?;
        let bare = traction(c, t, 0.0)?;
        odd = odd.max((f.f1 + mirror.f1).abs().max((f.f1 - bare.f1).abs()));
        let p = point(c, t)?;
        let m = p.x1 * f.f2 - p.x2 * f.f1;
        moment = moment.max((moment_density(c, t, cfg.k)? - m).abs() / m.abs().max(1.0));
    }
    Ok(vec![
        Check::bound("traction closed form against stress times normal", "traction across a circle", assembled, 1e-10),
        Check::bound("F1 odd in theta and free of k", "traction across a circle", odd, 1e-12),
        Check::bound("moment density against x1 F2 - x2 F1", "moment density on a circle", moment, 1e-10),
    ])
}

/// Closed forms at finite puncture radius. The mixed-sign arc energies are
/// compared for the record only; see the README.
pub fn finite_radius_checks(dom: &LensDomain, radii: &[f64], quad: &QuadConfig) -> lensfield::Result<Vec<Check>> {
    let mut force: f64 = 0.0;
    let mut t1: f64 = 0.0;
    let mut mom: f64 = 0.0;
    let mut energy: f64 = 0.0;
    let mut mixed: f64 = 0.0;
    let mut closure: f64 = 0.0;
    for &a in radii {
        let ix = dom.intersection_points(a)?;
        let f = total_force(dom, a, quad)?;
        let closed = resultant_force_closed_form(dom.outer, dom.inner, dom.k, ix.theta_a, ix.theta_d);
        force = force.max((f.t2.quadrature_value - closed).abs());
        t1 = t1.max(f.t1.quadrature_value.abs());
        let m = total_moment(dom, a, quad)?;
        mom = mom
            .max((m.outer.quadrature_value - outer_moment_closed_form(dom.outer, dom.k, ix.theta_a)).abs())
            .max((m.inner.quadrature_value - inner_moment_closed_form(dom.inner, dom.k, ix.theta_d)).abs());
        let e = boundary_energy(dom, a, quad)?;
        let forms = arc_energy_closed_forms(dom.outer, dom.inner, dom.k, ix.theta_a, ix.theta_d);
        energy = energy.max((e.v1 - forms.v1).abs()).max((e.v2 - forms.v2).abs());
        mixed = mixed
            .max((e.v1 - e.mixed_sign_forms.v1).abs())
            .max((e.v2 - e.mixed_sign_forms.v2).abs());
        closure = closure.max((e.v1 + e.v2 + e.w1 + e.w2 - e.total).abs());
    }
    Ok(vec![
        Check::bound("T2a quadrature against closed form", "resultant force on the punctured lens", force, 1e-8),
        Check::bound("T1 quadrature", "zero resultant force along x1", t1, 1e-10),
        Check::bound("arc moments against closed forms", "resultant couple on each arc", mom, 1e-8),
        Check::bound("arc energies V1, V2 against re-derived closed forms", "energy flux through the circle arcs", energy, 1e-8),
        Check::info(
            "arc energies V1, V2 against mixed-sign closed forms",
            "energy flux through the circle arcs, mixed-sign forms",
            json!(mixed),
            json!("differs by 8 c^2 sin(2 theta) per arc; the mixed-sign forms combine two orientations"),
        ),
        Check::bound("V1 + V2 + W1 + W2 equals total", "energy from boundary integrals", closure, 1e-12),
    ])
}

fn value_cell(v: &Value) -> Cell {
    match v {
        Value::Number(n) => Cell::opt(n.as_f64()),
        Value::String(s) => Cell::Text(s.clone()),
        _ => Cell::Empty,
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let quad = cfg.quad()?;
    let dom = LensDomain::new(cfg.r, cfg.k)?;
    let mut checks = field_checks(cfg)?;
    checks.extend(elasticity_checks(cfg)?);
    checks.extend(ellipticity_checks(cfg)?);
    checks.extend(traction_checks(cfg)?);
    let radii: Vec<f64> = match cfg.radii {
        Some(spec) => spec.radii(),
        None => FINITE_RADII.to_vec(),
    };
    checks.extend(finite_radius_checks(&dom, &radii, &quad)?);

    let mut table = Table::new(&["name", "paper_ref", "status", "measured", "expected", "tolerance"]);
    for c in &checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        };
        table.push(vec![
            Cell::text(&c.name),
            Cell::text(&c.paper_ref),
            Cell::text(status),
            value_cell(&c.measured),
            value_cell(&c.expected),
            Cell::opt(c.tolerance),
        ]);
    }

    let failed: Vec<Value> = checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| json!(c.name))
        .collect();
    let results = json!({
        "grid": cfg.grid,
        "finite_radii": radii,
        "checks_run": checks.len(),
        "failed": failed,
    });
    let mut warnings = Vec::new();
    if cfg.k == 0.0 {
        warnings.push("k = 0: lambda + 2 mu is negative somewhere, the Lame fields are not strongly elliptic".into());
    }
    Ok(Report { results, table, checks, warnings })
}
