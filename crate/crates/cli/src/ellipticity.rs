use lensfield::elasticity::{ellipticity_scan, EllipticityScan};
use lensfield::geometry::LensDomain;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{Cell, Report, Table};
use crate::verify::ellipticity_checks;
use crate::CliError;

pub const MIN_GRID: usize = 32;

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.grid < MIN_GRID {
        return Err(CliError::Usage(format!("ellipticity needs --grid >= {MIN_GRID}, got {}", cfg.grid)));
    }
    let scan = |k: f64| -> lensfield::Result<EllipticityScan> {
        ellipticity_scan(&LensDomain::new(cfg.r, k)?, cfg.grid)
    };
    let here = scan(cfg.k)?;
    let thr = here.k_threshold;

    let mut ks = vec![0.0, 0.25 * thr, 0.5 * thr, thr, thr + 0.01, 2.0 * thr, cfg.k];
    ks.sort_by(f64::total_cmp);
    ks.dedup();

    let mut table = Table::new(&["k", "min_margin", "argmin_c", "argmin_theta", "min_mu", "flag"]);
    let mut rows = Vec::new();
    for &k in &ks {
        let s = scan(k)?;
        let flag = if s.min_margin > 0.0 { "elliptic" } else { "not-elliptic" };
        table.push(vec![
            Cell::Num(k),
            Cell::Num(s.min_margin),
            Cell::Num(s.argmin_c),
            Cell::Num(s.argmin_theta),
            Cell::Num(s.min_mu),
            Cell::text(flag),
        ]);
        rows.push(s);
    }

    let checks = ellipticity_checks(cfg)?;
    let mut warnings = Vec::new();
    if here.min_margin <= 0.0 {
        warnings.push(format!(
            "lambda + 2 mu reaches {:.6e} at k = {}; strong ellipticity needs k > {thr:.6}",
            here.min_margin, cfg.k
        ));
    }
    let results = json!({
        "k": cfg.k,
        "min_margin": here.min_margin,
        "k_threshold": thr,
        "scan": here,
        "table": rows,
    });
    Ok(Report { results, table, checks, warnings })
}
