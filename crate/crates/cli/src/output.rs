use std::fmt::Display;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Number, Value};

/// JSON schema version stamped on every document.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: &'static str,
    pub wall_time_ms: u64,
    pub warnings: Vec<String>,
}

/// Arbitrary-length integer as a JSON number literal.
pub fn integer(v: impl Display) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integer literal"))
}

/// `{"schema": 1, "manifest": …, <body fields>}`.
pub fn document(manifest: &Manifest, body: Value) -> String {
    let mut doc = json!({ "schema": SCHEMA, "manifest": manifest });
    if let (Value::Object(doc), Value::Object(body)) = (&mut doc, body) {
        doc.extend(body);
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

/// Comma-joined rows under a header; fields never contain commas.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Right-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let mut l = parts.join("  ");
        l.push('\n');
        l
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}
