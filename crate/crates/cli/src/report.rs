//! Report files: a run manifest, a JSON summary and a flat table.

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const REPORT_DIR_VAR: &str = "CKDV_REPORT_DIR";
const DEFAULT_REPORT_DIR: &str = "ckdv-reports";

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("report `{0}` has no result rows")]
    Empty(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_digest: String,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    /// The timestamp honours `SOURCE_DATE_EPOCH` so repeated runs can be byte-identical.
    pub fn new(command: &str, config: &Value) -> Self {
        let when = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.trim().parse::<i64>().ok())
            .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
            .unwrap_or_else(Utc::now);
        Self {
            command: command.to_string(),
            config_digest: digest(config),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: when.to_rfc3339_opts(SecondsFormat::Secs, true),
        }
    }
}

/// SHA-256 of the canonical JSON text (sorted keys, no whitespace).
pub fn digest(config: &Value) -> String {
    hex::encode(Sha256::digest(canonical(config).as_bytes()))
}

fn canonical(v: &Value) -> String {
    // serde_json's default map is ordered by key, so this text is canonical.
    serde_json::to_string(v).expect("a Value always serializes")
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            serde_json::Number::from_f64(round12(n.as_f64().unwrap_or(f64::NAN))).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn float_text(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-6..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => float_text(round12(x)),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub name: String,
    pub manifest: RunManifest,
    pub summary: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(name: &str, manifest: RunManifest, summary: impl Serialize, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            manifest,
            summary: serde_json::to_value(summary).unwrap_or(Value::Null),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Value>) {
        self.rows.push(cells);
    }

    pub fn json(&self) -> Result<String, ReportError> {
        let mut top = Map::new();
        top.insert("manifest".into(), serde_json::to_value(&self.manifest)?);
        top.insert("summary".into(), self.summary.clone());
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().cloned()).collect()))
            .collect();
        top.insert("rows".into(), Value::Array(rows));
        Ok(serde_json::to_string_pretty(&round_value(Value::Object(top)))? + "\n")
    }

    pub fn csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(cell_text))?;
        }
        let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    pub fn table(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell_text).collect()).collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r.get(i).map_or(0, |c| c.chars().count()))
                    .chain([self.header[i].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &[String]| {
            let padded: Vec<String> =
                items.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, &self.header);
        for r in &cells {
            line(&mut out, r);
        }
        out
    }
}

pub fn report_dir() -> PathBuf {
    std::env::var_os(REPORT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_REPORT_DIR))
}

fn write(path: &Path, text: &str) -> Result<(), ReportError> {
    std::fs::write(path, text).map_err(|source| ReportError::Io { path: path.to_path_buf(), source })
}

/// Writes `<name>.json` and `<name>.csv` under `dir` and returns the text
/// to print for `format`.
pub fn emit_report(report: &Report, dir: &Path, format: Format) -> Result<(Vec<PathBuf>, String), ReportError> {
    if report.rows.is_empty() {
        return Err(ReportError::Empty(report.name.clone()));
    }
    std::fs::create_dir_all(dir).map_err(|source| ReportError::Io { path: dir.to_path_buf(), source })?;
    let (json, csv) = (report.json()?, report.csv()?);
    let json_path = dir.join(format!("{}.json", report.name));
    let csv_path = dir.join(format!("{}.csv", report.name));
    write(&json_path, &json)?;
    write(&csv_path, &csv)?;
    let shown = match format {
        Format::Json => json,
        Format::Csv => csv,
        Format::Table => report.table(),
    };
    Ok((vec![json_path, csv_path], shown))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn manifest() -> RunManifest {
        RunManifest {
            command: "test".into(),
            config_digest: digest(&json!({"b": 1, "a": [1.5, "x"]})),
            tool_version: "0".into(),
            timestamp: "1970-01-01T00:00:00Z".into(),
        }
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(-2.5e-20), -2.5e-20);
        assert!(round12(f64::NAN).is_nan());
        assert_eq!(float_text(1.675e-16), "1.675e-16");
        assert_eq!(float_text(0.25), "0.25");
        assert_eq!(float_text(0.0), "0");
    }

    #[test]
    fn digest_ignores_key_order() {
        let a = json!({"x": 1, "y": {"p": 2, "q": 3}});
        let b: Value = serde_json::from_str(r#"{"y":{"q":3,"p":2},"x":1}"#).unwrap();
        assert_eq!(digest(&a), digest(&b));
        assert_eq!(digest(&a).len(), 64);
        assert_ne!(digest(&a), digest(&json!({"x": 2})));
    }

    #[test]
    fn empty_reports_are_rejected() {
        let r = Report::new("empty", manifest(), json!({}), &["N", "ratio"]);
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(emit_report(&r, dir.path(), Format::Json), Err(ReportError::Empty(_))));
    }

    #[test]
    fn sweep_csv_and_json_layout() {
        let mut r = Report::new("sweep", manifest(), json!({"s_star": "-13/12"}), &["N", "ratio"]);
        r.row(vec![json!(16.0), json!(1.0 / 3.0)]);
        r.row(vec![json!(32.0), json!(0.25)]);
        let csv = r.csv().unwrap();
        assert_eq!(csv, "N,ratio\n16,0.333333333333\n32,0.25\n");
        let j: Value = serde_json::from_str(&r.json().unwrap()).unwrap();
        assert_eq!(j["summary"]["s_star"], "-13/12");
        assert_eq!(j["manifest"]["command"], "test");
        assert_eq!(j["rows"][0]["ratio"], json!(0.333333333333));
        let dir = tempfile::tempdir().unwrap();
        let (paths, shown) = emit_report(&r, dir.path(), Format::Table).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(shown.starts_with("N   ratio\n16  0.333333333333\n"), "{shown}");
    }
}
