use std::f64::consts::FRAC_PI_2;

use lensfield::boundary::energy_density;
use lensfield::elasticity::{lame, stress, MaterialPoint};
use lensfield::fields::{displacement, strain};
use lensfield::geometry::{circle_of_point, CircleId, Classification, LensDomain, Point2};
use lensfield::Error;
use serde_json::json;

use crate::config::{FieldName, ParamSpace, RunConfig};
use crate::report::{Cell, Check, Report, Table};
use crate::CliError;

fn value_columns(field: FieldName) -> &'static [&'static str] {
    match field {
        FieldName::Displacement => &["u1", "u2"],
        FieldName::Strain => &["e11", "e12", "e22"],
        FieldName::Stress => &["sigma11", "sigma12", "sigma22"],
        FieldName::Lame => &["mu", "lambda", "lambda_plus_2mu", "poisson"],
        FieldName::EnergyDensity => &["energy_density"],
    }
}

fn evaluate(field: FieldName, p: Point2, k: f64) -> lensfield::Result<Vec<Cell>> {
    let cells = match field {
        FieldName::Displacement => {
            let u = displacement(p)?;
            vec![Cell::Num(u.u1), Cell::Num(u.u2)]
        }
        FieldName::Strain => {
            let e = strain(p)?;
            vec![Cell::Num(e.t11), Cell::Num(e.t12), Cell::Num(e.t22)]
        }
        FieldName::Stress => {
            let s = stress(&MaterialPoint::new(p, k)?);
            vec![Cell::Num(s.t11), Cell::Num(s.t12), Cell::Num(s.t22)]
        }
        FieldName::Lame => {
            let l = lame(&MaterialPoint::new(p, k)?)?;
            vec![
                Cell::Num(l.mu),
                Cell::Num(l.lambda),
                Cell::Num(l.lambda_plus_2mu),
                Cell::opt(l.poisson),
            ]
        }
        FieldName::EnergyDensity => vec![Cell::Num(energy_density(p, k)?)],
    };
    if cells.iter().any(|c| matches!(c, Cell::Num(v) if !v.is_finite())) {
        return Err(Error::NonFinite { at: p.x1 });
    }
    Ok(cells)
}

fn is_singularity(e: &Error) -> bool {
    matches!(e, Error::Singular(_) | Error::Domain(_) | Error::Division(_) | Error::NonFinite { .. })
}

/// Sample points in fixed order: `(point, c, theta)`, where `c` and `theta`
/// are absent at the cusp.
fn sample_points(cfg: &RunConfig, space: ParamSpace) -> lensfield::Result<Vec<(Point2, Option<f64>, Option<f64>)>> {
    let n = cfg.grid;
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let dom = LensDomain::new(cfg.r, cfg.k)?;
    let mut pts = Vec::new();
    match space {
        ParamSpace::Cartesian => {
            for i in 0..n {
                let x1 = step(0.0, 2.0 * cfg.r, i);
                for j in 0..n {
                    let x2 = step(-cfg.r, cfg.r, j);
                    let p = Point2::new(x1, x2);
                    match dom.classify(p) {
                        Classification::Exterior => {}
                        Classification::Cusp => pts.push((p, None, None)),
                        _ => pts.push((p, Some(circle_of_point(p)?), Some(p.theta()))),
                    }
                }
            }
        }
        ParamSpace::Circle => {
            for i in 0..n {
                let c = step(1.0, cfg.r, i);
                let circle = CircleId::new(c)?;
                for j in 0..n {
                    let theta = step(-FRAC_PI_2, FRAC_PI_2, j);
                    let p = circle.point_at(theta)?;
                    if p.is_cusp() {
                        pts.push((Point2::ORIGIN, Some(c), Some(theta)));
                    } else {
                        pts.push((p, Some(c), Some(theta)));
                    }
                }
            }
        }
    }
    Ok(pts)
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let field = cfg
        .field
        .ok_or_else(|| CliError::Usage("sample needs --field".into()))?;
    let space = cfg.param_space.unwrap_or(ParamSpace::Cartesian);

    let values = value_columns(field);
    let mut columns = vec!["x1", "x2", "c", "theta"];
    columns.extend_from_slice(values);
    columns.push("flag");
    let mut table = Table::new(&columns);

    let mut singular = 0usize;
    for (p, c, theta) in sample_points(cfg, space)? {
        let head = vec![Cell::Num(p.x1), Cell::Num(p.x2), Cell::opt(c), Cell::opt(theta)];
        let evaluated = if p.is_cusp() {
            Err(Error::Singular("cusp".into()))
        } else {
            evaluate(field, p, cfg.k)
        };
        match evaluated {
            Ok(cells) => table.push([head, cells, vec![Cell::text("ok")]].concat()),
            Err(e) if is_singularity(&e) => {
                singular += 1;
                let mut row = head;
                row.extend(std::iter::repeat_n(Cell::Singular, values.len()));
                row.push(Cell::text("singular"));
                table.push(row);
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    if field == FieldName::Lame {
        let negative = table
            .rows
            .iter()
            .filter(|cells| matches!(cells[6], Cell::Num(v) if v <= 0.0))
            .count();
        checks.push(Check::info(
            "rows with lambda + 2 mu <= 0",
            "strong ellipticity of the Lame fields",
            json!(negative),
            json!(if cfg.k == 0.0 { "nonzero for k = 0" } else { "zero once k exceeds the threshold" }),
        ));
        if negative > 0 {
            warnings.push(format!("{negative} sample points are not strongly elliptic (lambda + 2 mu <= 0)"));
        }
    }
    if singular > 0 {
        warnings.push(format!("{singular} sample points are singular and carry no values"));
    }

    let results = json!({
        "field": field,
        "param_space": space,
        "rows": table.to_json(),
        "singular_rows": singular,
    });
    Ok(Report { results, table, checks, warnings })
}
