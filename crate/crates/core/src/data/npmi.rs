use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DataError;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// How disease-phenotype pairs absent from the triple file are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, Hash)]
pub enum MissingPolicy {
    /// Missing pairs score 0, tying with each other.
    #[default]
    Zero,
    /// Missing pairs score strictly below every observed score.
    Bottom,
}

/// Dense disease × phenotype score table.
#[derive(Debug, Clone)]
pub struct NpmiTable<T> {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub scores: Matrix<T>,
    pub observed: usize,
}

/// Reads `(row_id, col_id, score)` triples, tab or comma separated, with an
/// optional header line. Labels are ordered by first appearance.
pub fn load_npmi_triples<T: Scalar>(path: &Path, policy: MissingPolicy) -> Result<NpmiTable<T>, DataError> {
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io { path: path.to_path_buf(), source })?;
    parse_npmi_triples(&text, policy)
}

pub fn parse_npmi_triples<T: Scalar>(text: &str, policy: MissingPolicy) -> Result<NpmiTable<T>, DataError> {
    let mut rows: Vec<String> = Vec::new();
    let mut cols: Vec<String> = Vec::new();
    let mut row_ix: BTreeMap<String, usize> = BTreeMap::new();
    let mut col_ix: BTreeMap<String, usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> =
            if line.contains('\t') { line.split('\t') } else { line.split(',') }.map(str::trim).collect();
        if fields.len() != 3 {
            return Err(DataError::Ragged { row: lineno + 1, expected: 3, got: fields.len() });
        }
        let score: f64 = match fields[2].parse() {
            Ok(v) => v,
            Err(_) if entries.is_empty() && rows.is_empty() => continue,
            Err(_) => return Err(DataError::Parse { row: lineno + 1, col: 3, cell: fields[2].to_owned() }),
        };
        if !score.is_finite() {
            return Err(DataError::NonFinite { row: lineno + 1, col: 3 });
        }
        let r = *row_ix.entry(fields[0].to_owned()).or_insert_with(|| {
            rows.push(fields[0].to_owned());
            rows.len() - 1
        });
        let c = *col_ix.entry(fields[1].to_owned()).or_insert_with(|| {
            cols.push(fields[1].to_owned());
            cols.len() - 1
        });
        entries.push((r, c, score));
    }
    if entries.is_empty() {
        return Err(DataError::EmptyData);
    }
    let fill = match policy {
        MissingPolicy::Zero => 0.0,
        MissingPolicy::Bottom => entries.iter().map(|e| e.2).fold(f64::INFINITY, f64::min) - 1.0,
    };
    let mut scores = Matrix::from_fn(rows.len(), cols.len(), |_, _| T::of(fill));
    for &(r, c, s) in &entries {
        scores[(r, c)] = T::of(s);
    }
    log::info!(
        "npmi: {} rows x {} cols, {} observed, missing policy {:?}",
        rows.len(),
        cols.len(),
        entries.len(),
        policy
    );
    Ok(NpmiTable { row_labels: rows, col_labels: cols, scores, observed: entries.len() })
}
