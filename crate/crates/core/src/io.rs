//! Matrix documents in three text formats.
//!
//! * `plain`: the order `n` followed by `n*n` whitespace-separated reals,
//!   row-major.
//! * `csv`: `n` lines of `n` comma-separated reals, no header.
//! * `json`: `{"n": 2, "rows": [[2, -1], [-1, 2]]}`.
//!
//! Rendering writes the shortest decimal that reads back to the same `f64`,
//! so `parse(render(m)) == m` bit for bit in every format.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::matcore::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Plain,
    Csv,
    Json,
}

impl Format {
    /// Guesses from a file extension, defaulting to plain.
    pub fn infer(path: &Path) -> Format {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            _ => Format::Plain,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" | "txt" => Ok(Format::Plain),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::input(format!("unknown matrix format '{other}'"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Plain => "plain",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    /// File path or fixture name.
    pub source: String,
    pub format: Format,
    pub matrix: DenseMatrix,
}

/// Loads a fixture (`ex1`, `ex2`, `ex3`) or reads and parses a file.
/// `format` overrides the extension-based guess.
pub fn load(source: &str, format: Option<Format>) -> Result<MatrixDocument> {
    if let Some(matrix) = fixtures::by_name(source) {
        return Ok(MatrixDocument {
            source: source.to_string(),
            format: format.unwrap_or(Format::Plain),
            matrix,
        });
    }
    let path = Path::new(source);
    let format = format.unwrap_or_else(|| Format::infer(path));
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read '{source}': {e}")))?;
    Ok(MatrixDocument {
        source: source.to_string(),
        format,
        matrix: parse_str(&text, format)?,
    })
}

pub fn parse_str(text: &str, format: Format) -> Result<DenseMatrix> {
    match format {
        Format::Plain => parse_plain(text),
        Format::Csv => parse_csv(text),
        Format::Json => parse_json(text),
    }
}

pub fn render(m: &DenseMatrix, format: Format) -> String {
    match format {
        Format::Plain => {
            let mut out = format!("{}\n", m.n());
            for row in m.rows() {
                out.push_str(&join(row, " "));
                out.push('\n');
            }
            out
        }
        Format::Csv => m.rows().map(|r| join(r, ",") + "\n").collect(),
        Format::Json => {
            let doc = JsonMatrix {
                n: m.n(),
                rows: m.to_rows(),
            };
            serde_json::to_string(&doc).expect("finite matrix serialises") + "\n"
        }
    }
}

fn join(row: &[f64], sep: &str) -> String {
    row.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(sep)
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn parse_value(tok: &str, row: usize, col: usize) -> Result<f64> {
    let v: f64 = tok.trim().parse().map_err(|_| {
        parse_err(
            format!("row {row}, column {col}"),
            format!("'{tok}' is not a number"),
        )
    })?;
    if !v.is_finite() {
        return Err(parse_err(
            format!("row {row}, column {col}"),
            "value is not finite",
        ));
    }
    Ok(v)
}

fn parse_plain(text: &str) -> Result<DenseMatrix> {
    let mut tokens = text.split_whitespace();
    let head = tokens
        .next()
        .ok_or_else(|| parse_err("start", "empty document"))?;
    let n: usize = head.parse().map_err(|_| {
        parse_err(
            "header",
            format!("order '{head}' is not a positive integer"),
        )
    })?;
    if n < 1 {
        return Err(parse_err("header", "order must be at least 1"));
    }
    let mut data = Vec::with_capacity(n * n);
    for (k, tok) in tokens.enumerate() {
        if k >= n * n {
            return Err(parse_err(
                "end",
                format!("more than n*n = {} values after the order", n * n),
            ));
        }
        data.push(parse_value(tok, k / n + 1, k % n + 1)?);
    }
    if data.len() < n * n {
        let k = data.len();
        return Err(parse_err(
            format!("row {}, column {}", k / n + 1, k % n + 1),
            format!("expected {} values, found {k}", n * n),
        ));
    }
    DenseMatrix::new(n, data)
}

fn parse_csv(text: &str) -> Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(format!("row {}", r + 1), e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(c, tok)| parse_value(tok, rows.len() + 1, c + 1))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(parse_err("start", "empty document"));
    }
    if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(parse_err(
            format!("row {}", r + 1),
            format!("{} values in a matrix with {n} rows", row.len()),
        ));
    }
    DenseMatrix::from_rows(&rows)
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    n: usize,
    rows: Vec<Vec<f64>>,
}

fn parse_json(text: &str) -> Result<DenseMatrix> {
    let doc: JsonMatrix = serde_json::from_str(text).map_err(|e| {
        parse_err(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    if doc.n < 1 {
        return Err(parse_err("n", "order must be at least 1"));
    }
    if doc.rows.len() != doc.n {
        return Err(parse_err(
            "rows",
            format!("n = {} but {} rows given", doc.n, doc.rows.len()),
        ));
    }
    for (r, row) in doc.rows.iter().enumerate() {
        if row.len() != doc.n {
            return Err(parse_err(
                format!("row {}", r + 1),
                format!("{} values, expected {}", row.len(), doc.n),
            ));
        }
    }
    DenseMatrix::from_rows(&doc.rows)
}
