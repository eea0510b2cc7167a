use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Format};

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Rows for CSV output. Experiments without a natural table emit their verdicts.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Table {
        Table { header: header.to_vec(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    pub table: Option<Table>,
    /// Preformatted CSV that replaces the table (the Eden series).
    pub csv: Option<String>,
}

impl Outcome {
    pub fn verdict(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { name: name.into(), pass, detail: detail.into() });
    }
}

pub struct Report {
    pub config: ExperimentConfig,
    pub outcome: Outcome,
    pub wall_seconds: f64,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.outcome.verdicts.iter().all(|v| v.pass)
    }

    /// Everything except `timings` is a function of the configuration.
    pub fn to_json(&self) -> Value {
        json!({
            "tool": "latcomm",
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
            "results": self.outcome.results,
            "verdicts": self.outcome.verdicts,
            "pass": self.pass(),
            "timings": { "wall_seconds": self.wall_seconds },
        })
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports are plain JSON");
                s.push('\n');
                s
            }
            Format::Csv => {
                if let Some(csv) = &self.outcome.csv {
                    return csv.clone();
                }
                let t = self.outcome.table.clone().unwrap_or_else(|| {
                    let mut t = Table::new(&["name", "pass", "detail"]);
                    for v in &self.outcome.verdicts {
                        t.push(vec![v.name.clone(), v.pass.to_string(), v.detail.clone()]);
                    }
                    t
                });
                let mut out = t.header.join(",");
                out.push('\n');
                for r in &t.rows {
                    let cells: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
                    writeln!(out, "{}", cells.join(",")).unwrap();
                }
                out
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

pub fn big(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

pub fn bigint(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn rational(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// A positive quantity too large for a double, kept as its natural log.
pub fn ln_value(ln: f64) -> Value {
    json!({ "ln": ln })
}

pub fn rational_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Experiment, Overrides};

    #[test]
    fn csv_defaults_to_verdicts_and_quotes() {
        let config = ExperimentConfig::resolve(Overrides { subcommand: Some(Experiment::Table1), ..Default::default() }).unwrap();
        let mut outcome = Outcome::default();
        outcome.verdict("a", true, "x, y");
        let r = Report { config, outcome, wall_seconds: 0.0 };
        assert_eq!(r.emit(Format::Csv), "name,pass,detail\na,true,\"x, y\"\n");
        let v: Value = serde_json::from_str(&r.emit(Format::Json)).unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", r.emit(Format::Json));
    }
}
