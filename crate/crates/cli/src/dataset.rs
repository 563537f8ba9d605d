//! CSV ingestion: a header row, comma delimiter, `.` decimal point, UTF-8.
//! Columns are selected by name.

use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub path: PathBuf,
    pub response_name: String,
    pub explanatory_names: Vec<String>,
    /// Response values `x₁…xₙ`.
    pub response: Vec<f64>,
    /// Explanatory values, one row per observation, columns in declared order.
    pub explanatory: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn m(&self) -> usize {
        self.explanatory_names.len()
    }

    /// Column `j` of the explanatory matrix.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.explanatory.iter().map(|r| r[j]).collect()
    }
}

/// Reads the named columns of a CSV file. With `response = None` only the
/// explanatory columns are read (design-only use).
pub fn ingest_csv(path: &Path, response: Option<&str>, explanatory: &[String]) -> Result<Dataset> {
    if explanatory.is_empty() {
        return Err(CliError::Usage("at least one explanatory column is required".into()));
    }
    for (i, name) in explanatory.iter().enumerate() {
        if explanatory[..i].contains(name) || Some(name.as_str()) == response {
            return Err(CliError::Usage(format!("column '{name}' is named twice")));
        }
    }
    let io_err = |source| CliError::Io { path: path.to_path_buf(), source };
    let bytes = std::fs::read(path).map_err(io_err)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(bytes.as_slice());
    let headers = reader
        .headers()
        .map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            row: 0,
            line: 1,
            column: String::new(),
            reason: e.to_string(),
        })?
        .clone();
    let locate = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::MissingColumn { path: path.to_path_buf(), column: name.to_string() })
    };
    let response_idx = response.map(locate).transpose()?;
    let explanatory_idx = explanatory.iter().map(|n| locate(n)).collect::<Result<Vec<_>>>()?;

    let mut x = Vec::new();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            row,
            line: e.position().map_or(0, |p| p.line()),
            column: String::new(),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |idx: usize, name: &str| -> Result<f64> {
            let fail = |reason: String| CliError::Parse {
                path: path.to_path_buf(),
                row,
                line,
                column: name.to_string(),
                reason,
            };
            let raw = record.get(idx).map(str::trim).unwrap_or("");
            if raw.is_empty() {
                return Err(fail("missing value".into()));
            }
            let v: f64 = raw.parse().map_err(|_| fail(format!("'{raw}' is not a decimal number")))?;
            if !v.is_finite() {
                return Err(fail(format!("'{raw}' is not finite")));
            }
            Ok(v)
        };
        if let (Some(idx), Some(name)) = (response_idx, response) {
            x.push(cell(idx, name)?);
        }
        rows.push(explanatory_idx.iter().zip(explanatory).map(|(&j, n)| cell(j, n)).collect::<Result<Vec<_>>>()?);
    }

    let m = explanatory.len();
    if rows.len() < m + 2 {
        return Err(CliError::InsufficientRows { path: path.to_path_buf(), rows: rows.len(), needed: m + 2, m });
    }
    Ok(Dataset {
        path: path.to_path_buf(),
        response_name: response.unwrap_or_default().to_string(),
        explanatory_names: explanatory.to_vec(),
        response: x,
        explanatory: rows,
    })
}
