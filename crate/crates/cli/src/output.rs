//! CSV and JSON artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use liewave_core::analysis::Verdict;
use liewave_core::SpectralField;
use serde::Serialize;

use crate::config::{OutputBlock, RunConfig};
use crate::CliError;

/// 17 significant digits, round-trips every f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// An in-memory CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Row of numbers.
    pub fn push_nums(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| num(x)).collect());
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// `rep,k,l,re,im`, one row per matrix entry in dual order.
pub fn coefficient_csv(f: &SpectralField) -> String {
    let mut s = String::from("rep,k,l,re,im\n");
    for (r, c) in f.iter() {
        for ((k, l), z) in c.indexed_iter() {
            let _ = writeln!(s, "{},{k},{l},{},{}", r.index, num(z.re), num(z.im));
        }
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictEntry {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Abort,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Abort => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub status: Status,
    pub exit_code: i32,
    pub verdicts: Vec<VerdictEntry>,
    pub diagnostic: Option<String>,
    pub results: serde_json::Value,
    pub files: Vec<String>,
    pub core_version: &'static str,
    pub cli_version: &'static str,
    pub threads: usize,
    pub wall_time_s: f64,
    pub config: RunConfig,
}

/// Everything an experiment produces besides the report envelope.
#[derive(Debug, Clone, Default)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    /// File stem and field, one file per sampled time.
    pub coefficients: Vec<(String, SpectralField)>,
}

fn io(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes the tables (if csv is selected) and coefficient dumps; returns the
/// file names relative to the output directory.
pub fn write_artifacts(out: &OutputBlock, dir: &Path, artifacts: &Artifacts) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut files = Vec::new();
    if out.csv() {
        for t in &artifacts.tables {
            let name = format!("{}.csv", t.name);
            let path = dir.join(&name);
            fs::write(&path, t.render()).map_err(|e| io(&path, e))?;
            files.push(name);
        }
    }
    if out.dump_coefficients && !artifacts.coefficients.is_empty() {
        let sub = dir.join("coefficients");
        fs::create_dir_all(&sub).map_err(|e| io(&sub, e))?;
        for (stem, f) in &artifacts.coefficients {
            let name = format!("coefficients/{stem}.csv");
            let path = dir.join(&name);
            fs::write(&path, coefficient_csv(f)).map_err(|e| io(&path, e))?;
            files.push(name);
        }
    }
    Ok(files)
}

pub fn write_report(dir: &Path, report: &Report) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let path = dir.join("report.json");
    let text = serde_json::to_string_pretty(report).expect("report serialises");
    fs::write(&path, text + "\n").map_err(|e| io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, -1.0, std::f64::consts::PI, 1e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn tables_render() {
        let mut t = Table::new("x", &["a", "b"]);
        t.push_nums(&[1.0, 2.0]);
        t.push(vec!["R1".into(), "PASS".into()]);
        assert_eq!(t.render(), "a,b\n1.0000000000000000e0,2.0000000000000000e0\nR1,PASS\n");
    }
}
