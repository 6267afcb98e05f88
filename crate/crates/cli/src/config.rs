//! Run configuration: command-line flags over a flat `key = value` file over defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

pub const DEFAULT_R: f64 = 2.0;
pub const DEFAULT_K: f64 = 0.0;
// 65 puts (1, 1) on the cartesian grid for R = 2
pub const DEFAULT_GRID: usize = 65;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldName {
    Displacement,
    Strain,
    Stress,
    Lame,
    EnergyDensity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamSpace {
    Cartesian,
    Circle,
}

/// Puncture radii: one value, or `start` halved `count - 1` times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RadiusSpec {
    Single { a: f64 },
    Sequence { start: f64, count: usize },
}

impl RadiusSpec {
    pub fn radii(&self) -> Vec<f64> {
        match *self {
            RadiusSpec::Single { a } => vec![a],
            RadiusSpec::Sequence { start, count } => {
                (0..count).map(|n| start * 0.5f64.powi(n as i32)).collect()
            }
        }
    }
}

impl Default for RadiusSpec {
    fn default() -> Self {
        RadiusSpec::Sequence { start: 0.4, count: 7 }
    }
}

impl FromStr for RadiusSpec {
    type Err = String;

    /// Parses `START:COUNT`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (start, count) = s
            .split_once(':')
            .ok_or_else(|| format!("expected START:COUNT, got {s:?}"))?;
        let start: f64 = start.trim().parse().map_err(|e| format!("bad start {start:?}: {e}"))?;
        let count: usize = count.trim().parse().map_err(|e| format!("bad count {count:?}: {e}"))?;
        Ok(RadiusSpec::Sequence { start, count })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let q = lensfield::numerics::QuadConfig::default();
        Self { abs_tol: q.abs_tol, rel_tol: q.rel_tol }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(rename = "R")]
    pub r: f64,
    pub k: f64,
    pub grid: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<RadiusSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param_space: Option<ParamSpace>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.r > 1.0 && self.r.is_finite()) {
            return Err(CliError::Usage(format!("R must exceed 1, got {}", self.r)));
        }
        if !(self.k >= 0.0 && self.k.is_finite()) {
            return Err(CliError::Usage(format!("k must be nonnegative, got {}", self.k)));
        }
        if self.grid < 2 {
            return Err(CliError::Usage(format!("grid must be at least 2, got {}", self.grid)));
        }
        let t = self.tolerances;
        if !(t.abs_tol > 0.0 && t.rel_tol > 0.0) {
            return Err(CliError::Usage("tolerances must be positive".into()));
        }
        if let Some(spec) = self.radii {
            let (first, count) = match spec {
                RadiusSpec::Single { a } => (a, 1),
                RadiusSpec::Sequence { start, count } => (start, count),
            };
            if count == 0 {
                return Err(CliError::Usage("a-seq count must be positive".into()));
            }
            if !(first > 0.0 && first < 2.0) {
                return Err(CliError::Usage(format!("puncture radius must lie in (0, 2), got {first}")));
            }
        }
        Ok(())
    }

    pub fn quad(&self) -> Result<lensfield::numerics::QuadConfig, CliError> {
        let d = lensfield::numerics::QuadConfig::default();
        lensfield::numerics::QuadConfig::new(self.tolerances.abs_tol, self.tolerances.rel_tol, d.max_subdivisions)
            .map_err(CliError::from)
    }
}

/// Values collected from one source; `None` means "not given here".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub r: Option<f64>,
    pub k: Option<f64>,
    pub grid: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub radii: Option<RadiusSpec>,
    pub field: Option<FieldName>,
    pub param_space: Option<ParamSpace>,
}

impl Overrides {
    /// `self` wins wherever it has a value.
    pub fn or(self, lower: Overrides) -> Overrides {
        Overrides {
            r: self.r.or(lower.r),
            k: self.k.or(lower.k),
            grid: self.grid.or(lower.grid),
            format: self.format.or(lower.format),
            out: self.out.or(lower.out),
            abs_tol: self.abs_tol.or(lower.abs_tol),
            rel_tol: self.rel_tol.or(lower.rel_tol),
            radii: self.radii.or(lower.radii),
            field: self.field.or(lower.field),
            param_space: self.param_space.or(lower.param_space),
        }
    }

    pub fn resolve(self) -> RunConfig {
        let tol = Tolerances::default();
        RunConfig {
            r: self.r.unwrap_or(DEFAULT_R),
            k: self.k.unwrap_or(DEFAULT_K),
            grid: self.grid.unwrap_or(DEFAULT_GRID),
            format: self.format.unwrap_or(Format::Json),
            out: self.out,
            tolerances: Tolerances {
                abs_tol: self.abs_tol.unwrap_or(tol.abs_tol),
                rel_tol: self.rel_tol.unwrap_or(tol.rel_tol),
            },
            radii: self.radii,
            field: self.field,
            param_space: self.param_space,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("config key {key}: cannot parse {value:?}: {e}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, false).map_err(|e| CliError::Usage(format!("config key {key}: {e}")))
}

/// Parses the flat config format: one `key = value` per line, `#` comments.
/// Keys are the long flag names; `_` and `-` are interchangeable.
pub fn parse_config_text(text: &str) -> Result<Overrides, CliError> {
    let mut seen = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if seen.insert(key.clone(), value).is_some() {
            return Err(CliError::Usage(format!("config key {key} given twice")));
        }
    }

    let mut o = Overrides::default();
    for (key, value) in &seen {
        match key.as_str() {
            "R" | "r" => o.r = Some(parse_value(key, value)?),
            "k" => o.k = Some(parse_value(key, value)?),
            "grid" => o.grid = Some(parse_value(key, value)?),
            "format" => o.format = Some(parse_enum(key, value)?),
            "out" => o.out = Some(PathBuf::from(value)),
            "abs-tol" => o.abs_tol = Some(parse_value(key, value)?),
            "rel-tol" => o.rel_tol = Some(parse_value(key, value)?),
            "a" => {
                o.radii = match o.radii {
                    Some(_) => return Err(CliError::Usage("config gives both a and a-seq".into())),
                    None => Some(RadiusSpec::Single { a: parse_value(key, value)? }),
                }
            }
            "a-seq" => {
                o.radii = match o.radii {
                    Some(_) => return Err(CliError::Usage("config gives both a and a-seq".into())),
                    None => Some(value.parse().map_err(CliError::Usage)?),
                }
            }
            "field" => o.field = Some(parse_enum(key, value)?),
            "param-space" => o.param_space = Some(parse_enum(key, value)?),
            other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
        }
    }
    Ok(o)
}

pub fn load_config_file(path: &Path) -> Result<Overrides, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_and_precedence() {
        let file = parse_config_text("# run\nR = 1.5\nk=3\ngrid = 40\nformat = csv\na_seq = 0.2:4\n").unwrap();
        let flags = Overrides { k: Some(7.0), ..Default::default() };
        let cfg = flags.or(file).resolve();
        assert_eq!(cfg.r, 1.5);
        assert_eq!(cfg.k, 7.0);
        assert_eq!(cfg.grid, 40);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.radii, Some(RadiusSpec::Sequence { start: 0.2, count: 4 }));
        assert_eq!(cfg.radii.unwrap().radii(), vec![0.2, 0.1, 0.05, 0.025]);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_config_text("nonsense").is_err());
        assert!(parse_config_text("colour = red").is_err());
        assert!(parse_config_text("k = 1\nk = 2").is_err());
        assert!(parse_config_text("a = 0.1\na-seq = 0.4:3").is_err());
        assert!(parse_config_text("field = pressure").is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = Overrides::default().resolve();
        assert!(cfg.validate().is_ok());
        cfg.r = 1.0;
        assert!(cfg.validate().is_err());
        cfg.r = 2.0;
        cfg.k = -1.0;
        assert!(cfg.validate().is_err());
        cfg.k = 0.0;
        cfg.grid = 1;
        assert!(cfg.validate().is_err());
    }
}
