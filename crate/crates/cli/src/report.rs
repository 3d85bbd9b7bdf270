//! Report envelope and the two output encodings.
//!
//! JSON output is indented with every float written as `{:.16e}`, so a
//! report is a pure function of the command line and the input bytes. The
//! text encoding renders the same value as aligned `key  value` lines, with
//! arrays of records shown as tables.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use symnorm::{BlockMatrix, Complex64, ComplexMatrix};

use crate::matfile::format_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The claim checked by the command holds.
    Verified,
    /// The claim fails; margins show where.
    Violated,
    /// Nothing to decide (norm tables, searches, plain listings).
    Computed,
}

impl Verdict {
    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Verdict::Verified
        } else {
            Verdict::Violated
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified | Verdict::Computed => 0,
            Verdict::Violated => 1,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub command: Vec<String>,
    pub input_sha256: Option<String>,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(flatten)]
    pub body: T,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub type Cx = [f64; 2];

pub fn cx(z: Complex64) -> Cx {
    [z.re, z.im]
}

pub fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<Cx>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&z| cx(z)).collect())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct BlocksJson {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Cx>>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<Cx>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Cx>>,
}

impl From<&BlockMatrix> for BlocksJson {
    fn from(m: &BlockMatrix) -> Self {
        Self {
            n: m.n(),
            a: matrix_rows(m.a()),
            x: matrix_rows(m.x()),
            b: matrix_rows(m.b()),
        }
    }
}

/// One line of a Ky Fan comparison: `margin = rhs - lhs`.
#[derive(Debug, Serialize)]
pub struct MarginRow {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

pub fn margin_rows(lhs: &[f64], rhs: &[f64]) -> Vec<MarginRow> {
    lhs.iter()
        .zip(rhs)
        .enumerate()
        .map(|(i, (&l, &r))| MarginRow {
            k: i + 1,
            lhs: l,
            rhs: r,
            margin: r - l,
        })
        .collect()
}

fn number_text(n: &serde_json::Number) -> String {
    if n.is_f64() {
        format_f64(n.as_f64().expect("f64 numbers convert"))
    } else {
        n.to_string()
    }
}

/// Nesting depth of arrays; `None` when an object is inside.
fn array_depth(v: &Value) -> Option<usize> {
    match v {
        Value::Object(_) => None,
        Value::Array(items) => items
            .iter()
            .try_fold(0, |d, item| array_depth(item).map(|c| d.max(c)))
            .map(|d| d + 1),
        _ => Some(0),
    }
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Number(n) => out.push_str(&number_text(n)),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        // complex numbers and matrix rows stay on one line
        Value::Array(items) if array_depth(v).is_some_and(|d| d <= 2) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_json(out, item, indent);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(",\n");
                }
                out.push_str(&" ".repeat(indent + 2));
                write_json(out, item, indent + 2);
            }
            out.push('\n');
            out.push_str(&" ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(",\n");
                }
                out.push_str(&" ".repeat(indent + 2));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_json(out, item, indent + 2);
            }
            out.push('\n');
            out.push_str(&" ".repeat(indent));
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalars serialize")),
    }
}

/// Two-space indented JSON; floats as `{:.16e}`, arrays of depth at most two
/// on one line. Field order follows the struct declarations.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize to values");
    let mut out = String::new();
    write_json(&mut out, &v, 0);
    out.push('\n');
    out
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => number_text(n),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            format!("[{}]", parts.join(" "))
        }
        Value::Object(_) => serde_json::to_string(v).unwrap_or_default(),
    }
}

fn is_table(items: &[Value]) -> bool {
    !items.is_empty() && items.iter().all(Value::is_object)
}

fn flatten(
    prefix: &str,
    v: &Value,
    lines: &mut Vec<(String, String)>,
    tables: &mut Vec<(String, Vec<Value>)>,
) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, lines, tables);
            }
        }
        Value::Array(items) if is_table(items) => tables.push((prefix.to_string(), items.clone())),
        other => lines.push((prefix.to_string(), scalar_text(other))),
    }
}

fn render_table(out: &mut String, title: &str, rows: &[Value]) {
    let mut columns: Vec<String> = Vec::new();
    for r in rows {
        for k in r.as_object().expect("table rows are objects").keys() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            columns
                .iter()
                .map(|c| r.get(c).map(scalar_text).unwrap_or_else(|| "-".into()))
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(j, c)| {
            cells
                .iter()
                .map(|row| row[j].len())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    out.push('\n');
    out.push_str(title);
    out.push('\n');
    let line = |cols: &[String]| -> String {
        let padded: Vec<String> = cols
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(&columns));
    for row in &cells {
        out.push_str(&line(row));
    }
}

pub fn to_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize to values");
    let mut lines = Vec::new();
    let mut tables = Vec::new();
    flatten("", &v, &mut lines, &mut tables);
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in &lines {
        out.push_str(&format!("{k:<width$}  {val}\n"));
    }
    for (title, rows) in &tables {
        render_table(&mut out, title, rows);
    }
    out
}
