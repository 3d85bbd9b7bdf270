//! JSON matrix files.
//!
//! Two shapes are accepted, with every complex entry written as `[re, im]`:
//!
//! ```json
//! {"size": 2, "entries": [[[1, 0], [0, 1]], [[0, -1], [2, 0]]]}
//! {"n": 1, "A": [[[2, 0]]], "X": [[[0, 1]]], "B": [[[3, 0]]]}
//! ```
//!
//! `entries` may also be given flat, as `size * size` entries in row-major
//! order. Serialization always writes the nested form with 17 significant
//! digits, so parsing a serialized matrix reproduces it bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{Map, Value};
use symnorm::numkernel::check_hermitian;
use symnorm::{BlockMatrix, Complex64, ComplexMatrix};

#[derive(Debug, thiserror::Error)]
pub enum MatFileError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("dimension error in {field}: {message}")]
    Dimension { field: String, message: String },
    #[error("block {block} is not Hermitian (deviation {deviation:e}, allowed {allowed:e})")]
    NonHermitianBlock {
        block: String,
        deviation: f64,
        allowed: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFile {
    Full(ComplexMatrix),
    Block(BlockMatrix),
}

impl MatrixFile {
    /// The assembled matrix in either form.
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            MatrixFile::Full(m) => m.clone(),
            MatrixFile::Block(b) => b.assemble(),
        }
    }

    /// Block view; a full matrix must be even-sized and Hermitian.
    pub fn into_block(self) -> Result<BlockMatrix, MatFileError> {
        match self {
            MatrixFile::Block(b) => Ok(b),
            MatrixFile::Full(m) => {
                if !m.rows().is_multiple_of(2) {
                    return Err(MatFileError::Dimension {
                        field: "size".into(),
                        message: format!("a block matrix needs an even size, got {}", m.rows()),
                    });
                }
                hermitian_or_err("M", &m)?;
                BlockMatrix::from_assembled(&m).map_err(|e| MatFileError::Dimension {
                    field: "entries".into(),
                    message: e.to_string(),
                })
            }
        }
    }
}

pub fn parse_matrix_file(path: &Path) -> Result<MatrixFile, MatFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| MatFileError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_matrix_str(&text)
}

pub fn parse_matrix_str(text: &str) -> Result<MatrixFile, MatFileError> {
    let value: Value = serde_json::from_str(text).map_err(|e| MatFileError::Parse {
        context: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let Value::Object(obj) = value else {
        return Err(schema("<root>", "expected an object"));
    };
    if obj.contains_key("entries") || obj.contains_key("size") {
        let size = dimension(&obj, "size")?;
        let entries = obj
            .get("entries")
            .ok_or_else(|| schema("entries", "missing"))?;
        Ok(MatrixFile::Full(read_matrix(
            "entries", entries, size, true,
        )?))
    } else if obj.contains_key("n") {
        let n = dimension(&obj, "n")?;
        let mut blocks = Vec::with_capacity(3);
        for name in ["A", "X", "B"] {
            let v = obj.get(name).ok_or_else(|| schema(name, "missing"))?;
            blocks.push(read_matrix(name, v, n, false)?);
        }
        let b = blocks.pop().unwrap();
        let x = blocks.pop().unwrap();
        let a = blocks.pop().unwrap();
        hermitian_or_err("A", &a)?;
        hermitian_or_err("B", &b)?;
        Ok(MatrixFile::Block(
            BlockMatrix::new(a, x, b).expect("blocks validated above"),
        ))
    } else {
        Err(schema(
            "<root>",
            "expected keys {size, entries} or {n, A, X, B}",
        ))
    }
}

fn schema(field: &str, message: &str) -> MatFileError {
    MatFileError::Parse {
        context: format!("field {field}"),
        message: message.into(),
    }
}

fn hermitian_or_err(block: &str, m: &ComplexMatrix) -> Result<(), MatFileError> {
    match check_hermitian(m) {
        Ok(()) => Ok(()),
        Err(symnorm::Error::NonHermitianInput { deviation, allowed }) => {
            Err(MatFileError::NonHermitianBlock {
                block: block.into(),
                deviation,
                allowed,
            })
        }
        Err(e) => Err(MatFileError::Dimension {
            field: block.into(),
            message: e.to_string(),
        }),
    }
}

fn dimension(obj: &Map<String, Value>, key: &str) -> Result<usize, MatFileError> {
    let v = obj.get(key).ok_or_else(|| schema(key, "missing"))?;
    match v.as_u64() {
        Some(0) => Err(MatFileError::Dimension {
            field: key.into(),
            message: "must be positive".into(),
        }),
        Some(d) => Ok(d as usize),
        None => Err(schema(key, "expected a positive integer")),
    }
}

fn read_entry(field: &str, v: &Value) -> Result<Complex64, MatFileError> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| schema(field, "expected [re, im]"))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| schema(field, "real part is not a number"))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| schema(field, "imaginary part is not a number"))?;
    Ok(Complex64::new(re, im))
}

fn read_matrix(
    field: &str,
    v: &Value,
    size: usize,
    allow_flat: bool,
) -> Result<ComplexMatrix, MatFileError> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema(field, "expected an array"))?;
    // flat form: a list of [re, im] pairs rather than a list of rows
    let flat = allow_flat
        && rows
            .first()
            .is_some_and(|r| r.as_array().is_some_and(|p| p.iter().all(Value::is_number)));
    let mut data = Vec::with_capacity(size * size);
    if flat {
        if rows.len() != size * size {
            return Err(MatFileError::Dimension {
                field: field.into(),
                message: format!("{} entries, expected {}", rows.len(), size * size),
            });
        }
        for (idx, e) in rows.iter().enumerate() {
            data.push(read_entry(&format!("{field}[{idx}]"), e)?);
        }
    } else {
        if rows.len() != size {
            return Err(MatFileError::Dimension {
                field: field.into(),
                message: format!("{} rows, expected {size}", rows.len()),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| schema(&format!("{field}[{i}]"), "expected a row array"))?;
            if row.len() != size {
                return Err(MatFileError::Dimension {
                    field: format!("{field}[{i}]"),
                    message: format!("{} entries, expected {size}", row.len()),
                });
            }
            for (j, e) in row.iter().enumerate() {
                data.push(read_entry(&format!("{field}[{i}][{j}]"), e)?);
            }
        }
    }
    ComplexMatrix::new(size, size, data).map_err(|e| MatFileError::Dimension {
        field: field.into(),
        message: e.to_string(),
    })
}

/// `{:.16e}` keeps 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_rows(out: &mut String, m: &ComplexMatrix) {
    out.push('[');
    for i in 0..m.rows() {
        if i > 0 {
            out.push_str(",\n    ");
        }
        out.push('[');
        for (j, z) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "[{}, {}]", format_f64(z.re), format_f64(z.im));
        }
        out.push(']');
    }
    out.push(']');
}

pub fn serialize_full(m: &ComplexMatrix) -> String {
    assert!(m.is_square(), "matrix files hold square matrices");
    let mut out = format!("{{\n  \"size\": {},\n  \"entries\": ", m.rows());
    write_rows(&mut out, m);
    out.push_str("\n}\n");
    out
}

pub fn serialize_block(m: &BlockMatrix) -> String {
    let mut out = format!("{{\n  \"n\": {}", m.n());
    for (name, blk) in [("A", m.a()), ("X", m.x()), ("B", m.b())] {
        let _ = write!(out, ",\n  \"{name}\": ");
        write_rows(&mut out, blk);
    }
    out.push_str("\n}\n");
    out
}

pub fn serialize(file: &MatrixFile) -> String {
    match file {
        MatrixFile::Full(m) => serialize_full(m),
        MatrixFile::Block(b) => serialize_block(b),
    }
}
