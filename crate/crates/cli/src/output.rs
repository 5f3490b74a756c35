//! Rendering for the two output formats.

use serde_json::Value;
use strata::query::QueryResult;

use crate::config::{CliConfig, Format};

/// Prints a report: one JSON document, or `key=value` pairs for scalars and
/// one `key: json` line per nested field.
pub fn emit(cfg: &CliConfig, report: &Value) {
    println!("{}", render(cfg.format, report));
}

pub fn render(format: Format, report: &Value) -> String {
    match format {
        Format::Json => report.to_string(),
        Format::Table => match report {
            Value::Object(map) => {
                let scalars: Vec<String> = map
                    .iter()
                    .filter(|(_, v)| !v.is_object() && !v.is_array())
                    .map(|(k, v)| format!("{k}={}", scalar(v)))
                    .collect();
                let mut lines = Vec::new();
                if !scalars.is_empty() {
                    lines.push(scalars.join(" "));
                }
                lines.extend(
                    map.iter()
                        .filter(|(_, v)| v.is_object() || v.is_array())
                        .map(|(k, v)| format!("{k}: {v}")),
                );
                lines.join("\n")
            }
            other => scalar(other),
        },
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Query rows as JSON lines, or an aligned text table.
pub fn render_rows(format: Format, result: &QueryResult) -> String {
    match format {
        Format::Json => result.to_json_lines(),
        Format::Table => {
            let cells: Vec<Vec<String>> = result
                .rows
                .iter()
                .map(|r| r.iter().map(|v| v.to_string()).collect())
                .collect();
            let mut widths: Vec<usize> = result.columns.iter().map(|c| c.chars().count()).collect();
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |items: &[String]| {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:<w$}"))
                    .collect::<Vec<_>>()
                    .join(" | ")
                    .trim_end()
                    .to_owned()
            };
            let mut out = vec![line(&result.columns)];
            out.push(
                widths
                    .iter()
                    .map(|w| "-".repeat(*w))
                    .collect::<Vec<_>>()
                    .join("-+-"),
            );
            out.extend(cells.iter().map(|r| line(r)));
            out.push(format!("({} rows)", result.rows.len()));
            out.join("\n")
        }
    }
}
