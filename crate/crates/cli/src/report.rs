//! Run reports: scalar rows with units and provenance, plus named tables.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::scenario::Scenario;
use crate::CliError;

pub const RESULT_COLUMNS: [&str; 7] = ["scenario", "model", "quantity", "value", "unit", "tolerance", "provenance"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scenario: String,
    /// One model name, or `a vs b` for comparison rows.
    pub model: String,
    pub quantity: String,
    pub value: f64,
    pub unit: String,
    /// Numerical or agreement tolerance that applies to `value`.
    pub tolerance: Option<f64>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:e}"))).map_err(csv_err)?;
        }
        finish(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Fully resolved scenario; feeding it back through `--config`
    /// reproduces the run.
    pub config: Scenario,
    pub results: Vec<ReportRow>,
    pub tables: Vec<Table>,
}

impl RunReport {
    pub fn new(command: &str, config: &Scenario) -> Self {
        Self {
            tool: "flatspace".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.clone(),
            results: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn add(&mut self, model: &str, quantity: &str, value: f64, unit: &str, tolerance: Option<f64>, provenance: &str) {
        self.results.push(ReportRow {
            scenario: self.config.name.clone(),
            model: model.into(),
            quantity: quantity.into(),
            value,
            unit: unit.into(),
            tolerance,
            provenance: provenance.into(),
        });
    }

    pub fn find(&self, model: &str, quantity: &str) -> Option<&ReportRow> {
        self.results.iter().find(|r| r.model == model && r.quantity == quantity)
    }

    /// Rejects non-finite values, which JSON cannot carry.
    pub fn check_finite(&self) -> Result<(), CliError> {
        for r in &self.results {
            if !r.value.is_finite() {
                return Err(CliError::Numerical(format!("{} for {} is not finite", r.quantity, r.model)));
            }
        }
        for t in &self.tables {
            if t.rows.iter().flatten().any(|v| !v.is_finite()) {
                return Err(CliError::Numerical(format!("table {} holds non-finite values", t.name)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite report serializes") + "\n"
    }

    pub fn results_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(RESULT_COLUMNS).map_err(csv_err)?;
        for r in &self.results {
            let value = format!("{:e}", r.value);
            let tol = r.tolerance.map(|t| format!("{t:e}")).unwrap_or_default();
            w.write_record([&r.scenario, &r.model, &r.quantity, &value, &r.unit, &tol, &r.provenance])
                .map_err(csv_err)?;
        }
        finish(w)
    }

    /// Writes `report.json`, `results.csv` and one CSV per table into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        fs::File::create(dir.join("report.json"))?.write_all(self.to_json().as_bytes())?;
        fs::File::create(dir.join("results.csv"))?.write_all(self.results_csv()?.as_bytes())?;
        for t in &self.tables {
            fs::File::create(dir.join(format!("{}.csv", t.name)))?.write_all(t.to_csv()?.as_bytes())?;
        }
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
