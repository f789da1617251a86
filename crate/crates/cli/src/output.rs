//! Report rendering.
//!
//! JSON is the canonical form: object keys are sorted and floats use the
//! shortest representation that round-trips, so equal runs give identical
//! bytes. CSV and the human format are flattenings of the same tree.

use std::collections::BTreeSet;
use std::io::Write;

use serde_json::Value;

use crate::{CliError, Report, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Human,
}

/// `(path, scalar)` leaves in document order; paths join keys and
/// indices with `.`.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(value, String::new(), &mut out);
    out
}

fn walk(value: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                walk(v, join(k), out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                walk(v, join(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push((path, s.clone())),
        other => out.push((path, other.to_string())),
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io {
        path: "csv output".into(),
        source: std::io::Error::other(e),
    }
}

/// Sweeps become one line per grid point; anything else a `key,value` table.
fn render_csv(report: &Report) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match report.result.get("rows").and_then(Value::as_array) {
        Some(rows) => {
            let flat: Vec<Vec<(String, String)>> = rows.iter().map(flatten).collect();
            let columns: BTreeSet<&str> = flat.iter().flatten().map(|(k, _)| k.as_str()).collect();
            w.write_record(&columns).map_err(csv_error)?;
            for row in &flat {
                let record = columns
                    .iter()
                    .map(|c| row.iter().find(|(k, _)| k == c).map_or("", |(_, v)| v.as_str()));
                w.write_record(record).map_err(csv_error)?;
            }
        }
        None => {
            w.write_record(["key", "value"]).map_err(csv_error)?;
            for (k, v) in flatten(&serde_json::to_value(report).expect("report serializes")) {
                w.write_record([k, v]).map_err(csv_error)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| csv_error(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 input"))
}

fn render_human(report: &Report) -> String {
    let mut s = format!("qheun {} ({})\n", report.command, report.version);
    for (k, v) in flatten(&report.result) {
        s.push_str(&format!("  {k} = {v}\n"));
    }
    s
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => render_csv(report),
        Format::Human => Ok(render_human(report)),
    }
}

/// Writes the rendered report to `config.output` or stdout.
pub fn emit(report: &Report, config: &RunConfig) -> Result<(), CliError> {
    let text = render(report, config.format)?;
    match &config.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "stdout".into(),
            source,
        }),
    }
}
