use lensfield::boundary::{boundary_energy, limit_report, total_force, total_moment, LimitReport};
use lensfield::geometry::LensDomain;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{Cell, Check, Report, Table};
use crate::verify::finite_radius_checks;
use crate::CliError;

pub const GAMMA_DISCLOSURE: &str = "The limiting couple is unresolved. \
Taking theta_A, theta_D -> pi/2 and cos 2 theta -> -1 in the two arc closed forms gives, term by term, \
8 (pi/2)(c2^2 - c1^2) + 2 pi (2 c1^2 - 2 c2^2) = 0, whereas the quoted resultant couple is 4 (R^2 - 1) pi. \
Gamma_a here comes from direct quadrature and is extrapolated to a -> 0; both numbers are reported \
and neither is used as ground truth.";

pub const ORIENTATION_NOTE: &str = "Arc orientation: outer circle clockwise from A to B, inner circle \
anticlockwise from C to D, ball arcs anticlockwise. Moment densities are x1 F2 - x2 F1 (anticlockwise \
positive); T2a and Gamma_a are the negated sums over the two circle arcs.";

const COLUMNS: [&str; 26] = [
    "a",
    "theta_a",
    "theta_d",
    "t1",
    "t2a",
    "t2a_closed",
    "outer_f2",
    "inner_f2",
    "gamma_a",
    "gamma_a_closed",
    "gamma_outer",
    "gamma_outer_closed",
    "gamma_inner",
    "gamma_inner_closed",
    "v1",
    "v1_closed",
    "v1_mixed_sign",
    "v2",
    "v2_closed",
    "v2_mixed_sign",
    "w1",
    "w2",
    "total",
    "energy",
    "a_times_energy",
    "tan_theta_a_excess",
];

fn limit_checks(cfg: &RunConfig, lim: &LimitReport) -> Vec<Check> {
    let a_min = lim.rows.last().map_or(0.0, |r| r.a);
    let excess = lim.rows.last().map_or(0.0, |r| r.tan_theta_a_excess.abs());
    let energy_tol = if cfg.k > 0.0 { 1e-3 } else { 1e-6 };
    vec![
        Check::bound("T1 over all radii", "zero resultant force along x1", lim.t1_max_abs, 1e-10),
        Check::bound("extrapolated T2", "vanishing resultant force in the limit", lim.t2_fit.constant_term.abs(), 1e-6),
        Check::close(
            "singular coefficient of E_a",
            "strain energy grows like 2k(R - 1)/a",
            lim.energy_fit.singular_coeff,
            lim.energy_coeff_expected,
            energy_tol,
        ),
        Check::bound("tan(theta_A) - 2 c1 / a at the smallest radius", "tan theta_A approaches 2 c1 / a", excess, a_min),
        Check::info(
            "extrapolated couple against the quoted 4 (R^2 - 1) pi",
            "resultant couple on the lens",
            json!(lim.gamma_fit.constant_term),
            json!(lim.gamma_quoted),
        ),
    ]
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let quad = cfg.quad()?;
    let dom = LensDomain::new(cfg.r, cfg.k)?;
    let radii = cfg.radii.unwrap_or_default().radii();

    let mut table = Table::new(&COLUMNS);
    let mut per_radius = Vec::new();
    for &a in &radii {
        let ix = dom.intersection_points(a)?;
        let f = total_force(&dom, a, &quad)?;
        let m = total_moment(&dom, a, &quad)?;
        let e = boundary_energy(&dom, a, &quad)?;
        let closed = |r: &lensfield::boundary::IntegralReport| Cell::opt(r.closed_form_value);
        table.push(vec![
            Cell::Num(a),
            Cell::Num(ix.theta_a),
            Cell::Num(ix.theta_d),
            Cell::Num(f.t1.quadrature_value),
            Cell::Num(f.t2.quadrature_value),
            closed(&f.t2),
            Cell::Num(f.outer_f2.quadrature_value),
            Cell::Num(f.inner_f2.quadrature_value),
            Cell::Num(m.gamma.quadrature_value),
            closed(&m.gamma),
            Cell::Num(m.outer.quadrature_value),
            closed(&m.outer),
            Cell::Num(m.inner.quadrature_value),
            closed(&m.inner),
            Cell::Num(e.v1),
            Cell::Num(e.closed_forms.v1),
            Cell::Num(e.mixed_sign_forms.v1),
            Cell::Num(e.v2),
            Cell::Num(e.closed_forms.v2),
            Cell::Num(e.mixed_sign_forms.v2),
            Cell::Num(e.w1),
            Cell::Num(e.w2),
            Cell::Num(e.total),
            Cell::Num(e.energy),
            Cell::Num(a * e.energy),
            Cell::Num(ix.theta_a.tan() - 2.0 * dom.outer / a),
        ]);
        per_radius.push(json!({ "a": a, "force": f, "moment": m, "energy": e }));
    }

    let mut checks = finite_radius_checks(&dom, &radii, &quad)?;
    let mut warnings = vec![GAMMA_DISCLOSURE.to_string()];
    let limits = if radii.len() >= 3 {
        let lim = limit_report(&dom, &radii, &quad)?;
        checks.extend(limit_checks(cfg, &lim));
        Some(lim)
    } else {
        warnings.push("fewer than three radii: no a -> 0 extrapolation".into());
        None
    };

    let gamma = limits.as_ref().map(|lim| {
        json!({
            "extrapolated_limit": lim.gamma_fit.constant_term,
            "quoted_limit": lim.gamma_quoted,
            "difference": lim.gamma_difference,
            "disclosure": GAMMA_DISCLOSURE,
        })
    });
    let results = json!({
        "radii": radii,
        "orientation": ORIENTATION_NOTE,
        "rows": table.to_json(),
        "per_radius": per_radius,
        "limits": limits,
        "gamma": gamma,
    });
    Ok(Report { results, table, checks, warnings })
}
