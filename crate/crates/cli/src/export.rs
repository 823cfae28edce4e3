//! File output: check tables, matrices, JSON.

use crate::config::JsonComplex;
use crate::error::{CliError, CliResult};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;
use szego_core::compression::CompressedMatrix;

/// One row of the verification table. A skipped check has no measurement and passes.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, measured: f64, threshold: f64) -> Self {
        Check {
            name: name.to_string(),
            measured: Some(measured),
            threshold,
            pass: measured <= threshold,
        }
    }

    pub fn skipped(name: &str) -> Self {
        Check {
            name: name.to_string(),
            measured: None,
            threshold: 0.0,
            pass: true,
        }
    }
}

pub fn check_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
    let mut out = format!("{:<width$}  {:>12}  {:>12}  result\n", "check", "measured", "threshold");
    for c in checks {
        let measured = c.measured.map_or("-".to_string(), |m| format!("{m:.3e}"));
        let result = match (c.measured, c.pass) {
            (None, _) => "skip",
            (_, true) => "pass",
            (_, false) => "FAIL",
        };
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>12.3e}  {}",
            c.name, measured, c.threshold, result
        );
    }
    out.pop();
    out
}

pub fn checks_csv(checks: &[Check]) -> String {
    let mut out = String::from("check,measured,threshold,pass\n");
    for c in checks {
        let measured = c.measured.map_or(String::new(), |m| m.to_string());
        let _ = writeln!(out, "\"{}\",{},{},{}", c.name, measured, c.threshold, c.pass);
    }
    out
}

/// Row-major CSV: a `rows,cols,path` header, its values, then one line of `re,im` pairs per row.
pub fn matrix_csv(a: &CompressedMatrix) -> String {
    let m = a.matrix();
    let mut out = format!("rows,cols,path\n{},{},{}\n", m.rows(), m.cols(), a.path());
    for r in 0..m.rows() {
        let line: Vec<String> = m.row(r).iter().map(|z| format!("{},{}", z.re, z.im)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct MatrixJson<'a> {
    rows: usize,
    cols: usize,
    path: String,
    n: usize,
    degree: usize,
    symbol: &'a str,
    data: Vec<Vec<JsonComplex>>,
}

pub fn matrix_json(a: &CompressedMatrix) -> CliResult<String> {
    let m = a.matrix();
    to_json(&MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        path: a.path().to_string(),
        n: a.n(),
        degree: a.degree(),
        symbol: a.symbol(),
        data: (0..m.rows())
            .map(|r| m.row(r).iter().map(|&z| z.into()).collect())
            .collect(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Check(format!("cannot serialize output: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn ensure_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}
