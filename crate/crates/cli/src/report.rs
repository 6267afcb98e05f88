//! Report assembly and the two output formats.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const SINGULAR: &str = "singular";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported for the record; never affects the exit status.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_ref: String,
    pub status: Status,
    pub measured: Value,
    pub expected: Value,
    pub tolerance: Option<f64>,
}

impl Check {
    /// Hard check `measured <= tolerance` on a residual-like quantity.
    pub fn bound(name: &str, paper_ref: &str, measured: f64, tolerance: f64) -> Self {
        let status = if measured <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            paper_ref: paper_ref.into(),
            status,
            measured: json!(measured),
            expected: json!(0.0),
            tolerance: Some(tolerance),
        }
    }

    /// Hard check `|measured - expected| <= tolerance`.
    pub fn close(name: &str, paper_ref: &str, measured: f64, expected: f64, tolerance: f64) -> Self {
        let ok = (measured - expected).abs() <= tolerance;
        Self {
            name: name.into(),
            paper_ref: paper_ref.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: json!(measured),
            expected: json!(expected),
            tolerance: Some(tolerance),
        }
    }

    pub fn holds(name: &str, paper_ref: &str, measured: f64, expected: &str, ok: bool) -> Self {
        Self {
            name: name.into(),
            paper_ref: paper_ref.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: json!(measured),
            expected: json!(expected),
            tolerance: None,
        }
    }

    pub fn info(name: &str, paper_ref: &str, measured: Value, expected: Value) -> Self {
        Self {
            name: name.into(),
            paper_ref: paper_ref.into(),
            status: Status::Info,
            measured,
            expected,
            tolerance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
    Singular,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }

    pub fn text(s: &str) -> Self {
        Cell::Text(s.to_string())
    }

    fn csv(&self) -> String {
        match self {
            // adding 0.0 folds -0.0 into 0.0
            Cell::Num(v) => format!("{:.16e}", v + 0.0),
            Cell::Text(s) => s.clone(),
            Cell::Empty | Cell::Singular => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
            Cell::Singular => json!(SINGULAR),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|cells| {
                let m: Map<String, Value> =
                    self.columns.iter().cloned().zip(cells.iter().map(Cell::json)).collect();
                Value::Object(m)
            })
            .collect();
        Value::Array(rows)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(&self.columns).map_err(io_err)?;
        for cells in &self.rows {
            out.write_record(cells.iter().map(Cell::csv)).map_err(io_err)?;
        }
        out.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Everything one subcommand produces.
#[derive(Debug, Clone)]
pub struct Report {
    pub results: Value,
    /// What the CSV format writes; JSON carries it inside `results`.
    pub table: Table,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self, config: &RunConfig) -> Value {
        json!({
            "config": config,
            "results": self.results,
            "checks": self.checks,
            "warnings": self.warnings,
        })
    }
}

/// Writes the report in the configured format to `--out` or stdout.
pub fn emit(report: &Report, config: &RunConfig) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match &config.out {
        Some(path) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    write_report(report, config, sink)
}

pub fn write_report<W: Write>(report: &Report, config: &RunConfig, mut w: W) -> Result<(), CliError> {
    match config.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &report.to_json(config))
                .map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(w).map_err(|e| CliError::Io(e.to_string()))?;
            w.flush().map_err(|e| CliError::Io(e.to_string()))
        }
        Format::Csv => report.table.write_csv(w),
    }
}

/// One line per check, for stderr.
pub fn summary_lines(report: &Report) -> Vec<String> {
    let mut lines: Vec<String> = report
        .checks
        .iter()
        .map(|c| {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            format!("{tag} {} measured={} expected={}", c.name, c.measured, c.expected)
        })
        .collect();
    lines.extend(report.warnings.iter().map(|w| format!("WARN {w}")));
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_cells_use_seventeen_digits() {
        let mut t = Table::new(&["x", "y", "flag"]);
        t.push(vec![Cell::Num(0.1), Cell::Singular, Cell::text("singular")]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "x,y,flag\n1.0000000000000001e-1,,singular\n");
        let parsed: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(parsed, 0.1);
    }

    #[test]
    fn json_marks_singular_cells() {
        let mut t = Table::new(&["u1"]);
        t.push(vec![Cell::Singular]);
        t.push(vec![Cell::Num(2.0)]);
        assert_eq!(t.to_json()[0]["u1"], "singular");
        assert_eq!(t.to_json()[1]["u1"], 2.0);
    }

    #[test]
    fn info_never_fails() {
        let r = Report {
            results: Value::Null,
            table: Table::default(),
            checks: vec![Check::info("x", "y", json!(1.0), json!(2.0)), Check::bound("z", "w", 0.5, 1.0)],
            warnings: vec![],
        };
        assert!(r.passed());
    }
}
