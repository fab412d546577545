//! Dataset ingestion, standardization, subsampling and correlation estimators.

mod npmi;
mod rank;

pub use npmi::{load_npmi_triples, MissingPolicy, NpmiTable};
pub use rank::{spearman_rank_correlation, PreRanked, RankVector};

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Matrix, SpdMatrix};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at row {row}, column {col}: {cell:?} is not a number")]
    Parse { row: usize, col: usize, cell: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row} has {got} fields, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("no data rows")]
    EmptyData,
    #[error("need at least {min} {what}, found {found}")]
    TooSmall { what: &'static str, min: usize, found: usize },
    #[error("column {col} ({name}) has zero variance")]
    ZeroVariance { col: usize, name: String },
    #[error("requested {requested} rows but only {available} available")]
    TooManyRows { requested: usize, available: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("rank vector is constant")]
    DegenerateRanks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum HeaderMode {
    /// Header present iff any first-row cell fails to parse as a number.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct IngestConfig {
    pub header: HeaderMode,
    /// `None` picks `;` when the first line contains more semicolons than commas.
    pub delimiter: Option<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset<T> {
    pub values: Matrix<T>,
    pub column_names: Vec<String>,
}

impl<T: Scalar> RawDataset<T> {
    pub fn new(values: Matrix<T>, column_names: Vec<String>) -> Result<Self, DataError> {
        if column_names.len() != values.cols() {
            return Err(DataError::LengthMismatch { left: column_names.len(), right: values.cols() });
        }
        if values.rows() < 2 {
            return Err(DataError::TooSmall { what: "rows", min: 2, found: values.rows() });
        }
        if values.cols() < 2 {
            return Err(DataError::TooSmall { what: "columns", min: 2, found: values.cols() });
        }
        for i in 0..values.rows() {
            for j in 0..values.cols() {
                if !values[(i, j)].is_finite() {
                    return Err(DataError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { values, column_names })
    }

    /// Unnamed columns get labels `x0, x1, ...`.
    pub fn unnamed(values: Matrix<T>) -> Result<Self, DataError> {
        let names = (0..values.cols()).map(|j| format!("x{j}")).collect();
        Self::new(values, names)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.values.rows()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.values.cols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedDataset<T> {
    pub values: Matrix<T>,
    pub column_names: Vec<String>,
    pub means: Vec<T>,
    pub sds: Vec<T>,
}

impl<T: Scalar> StandardizedDataset<T> {
    #[inline]
    pub fn n(&self) -> usize {
        self.values.rows()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.values.cols()
    }

    /// Wraps values that are already standardized (unit moments are not re-checked).
    pub fn from_standardized(values: Matrix<T>, column_names: Vec<String>) -> Self {
        let p = values.cols();
        Self { values, column_names, means: vec![T::zero(); p], sds: vec![T::one(); p] }
    }
}

fn sniff_delimiter(first_line: &str) -> u8 {
    let semis = first_line.matches(';').count();
    let commas = first_line.matches(',').count();
    let tabs = first_line.matches('\t').count();
    if tabs > semis && tabs > commas {
        b'\t'
    } else if semis > commas {
        b';'
    } else {
        b','
    }
}

pub fn load_matrix_csv<T: Scalar>(path: &Path, cfg: &IngestConfig) -> Result<RawDataset<T>, DataError> {
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io { path: path.to_path_buf(), source })?;
    parse_matrix_csv(&text, cfg)
}

pub fn parse_matrix_csv<T: Scalar>(text: &str, cfg: &IngestConfig) -> Result<RawDataset<T>, DataError> {
    let first = text.lines().next().ok_or(DataError::EmptyData)?;
    let delim = cfg.delimiter.unwrap_or_else(|| sniff_delimiter(first));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(delim)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records = reader.records();
    let first_rec = match records.next() {
        Some(r) => r?,
        None => return Err(DataError::EmptyData),
    };
    let has_header = match cfg.header {
        HeaderMode::Present => true,
        HeaderMode::Absent => false,
        HeaderMode::Auto => first_rec.iter().any(|c| c.parse::<f64>().is_err()),
    };
    let width = first_rec.len();
    let mut names: Vec<String> = if has_header {
        first_rec.iter().map(str::to_owned).collect()
    } else {
        (0..width).map(|j| format!("x{j}")).collect()
    };
    let mut data: Vec<T> = Vec::new();
    let mut rows = 0usize;
    let push_row = |rec: &csv::StringRecord, line: usize, data: &mut Vec<T>| -> Result<(), DataError> {
        if rec.len() != width {
            return Err(DataError::Ragged { row: line, expected: width, got: rec.len() });
        }
        for (j, cell) in rec.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| DataError::Parse { row: line, col: j + 1, cell: cell.to_owned() })?;
            if !v.is_finite() {
                return Err(DataError::NonFinite { row: line, col: j + 1 });
            }
            data.push(T::of(v));
        }
        Ok(())
    };
    if !has_header {
        push_row(&first_rec, 1, &mut data)?;
        rows += 1;
    }
    for rec in records {
        let rec = rec?;
        if rec.len() == 1 && rec.get(0).is_some_and(str::is_empty) {
            continue;
        }
        let line = rec.position().map_or(rows + 1, |p| p.line() as usize);
        push_row(&rec, line, &mut data)?;
        rows += 1;
    }
    if rows == 0 {
        return Err(DataError::EmptyData);
    }
    names.truncate(width);
    RawDataset::new(Matrix::from_vec(rows, width, data).expect("row width checked"), names)
}

fn column_moments<T: Scalar>(m: &Matrix<T>) -> (Vec<T>, Vec<T>) {
    let n = T::of(m.rows() as f64);
    let p = m.cols();
    let mut mean = vec![T::zero(); p];
    for i in 0..m.rows() {
        for (acc, &v) in mean.iter_mut().zip(m.row(i)) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|v| *v /= n);
    let mut var = vec![T::zero(); p];
    for i in 0..m.rows() {
        for ((acc, &v), &mu) in var.iter_mut().zip(m.row(i)).zip(&mean) {
            let d = v - mu;
            *acc += d * d;
        }
    }
    let sd = var.into_iter().map(|v| (v / n).sqrt()).collect();
    (mean, sd)
}

/// `z_ij = (x_ij - x̄_j) / Υ_j` with the population (divide-by-n) sd.
pub fn standardize<T: Scalar>(d: &RawDataset<T>) -> Result<StandardizedDataset<T>, DataError> {
    let (means, sds) = column_moments(&d.values);
    for (j, &s) in sds.iter().enumerate() {
        let scale = means[j].abs().max(T::one());
        if !(s > T::epsilon() * scale * T::of(16.0)) {
            return Err(DataError::ZeroVariance { col: j, name: d.column_names[j].clone() });
        }
    }
    let values = Matrix::from_fn(d.n(), d.p(), |i, j| (d.values[(i, j)] - means[j]) / sds[j]);
    Ok(StandardizedDataset { values, column_names: d.column_names.clone(), means, sds })
}

/// Uniform sample without replacement; rows come back in sampled order.
pub fn subsample_rows<T: Scalar>(d: &RawDataset<T>, n_sub: usize, seed: u64) -> Result<RawDataset<T>, DataError> {
    if n_sub > d.n() {
        return Err(DataError::TooManyRows { requested: n_sub, available: d.n() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = rand::seq::index::sample(&mut rng, d.n(), n_sub);
    let mut data = Vec::with_capacity(n_sub * d.p());
    for i in idx.iter() {
        data.extend_from_slice(d.values.row(i));
    }
    RawDataset::new(Matrix::from_vec(n_sub, d.p(), data).expect("sized"), d.column_names.clone())
}

/// Product-moment correlation from population moments, unit diagonal.
pub fn empirical_column_correlation<T: Scalar>(d: &RawDataset<T>) -> Result<SpdMatrix<T>, DataError> {
    let (means, sds) = column_moments(&d.values);
    for (j, &s) in sds.iter().enumerate() {
        if !(s > T::zero()) {
            return Err(DataError::ZeroVariance { col: j, name: d.column_names[j].clone() });
        }
    }
    let centered = Matrix::from_fn(d.n(), d.p(), |i, j| d.values[(i, j)] - means[j]);
    let cov = centered.gram();
    let n = T::of(d.n() as f64);
    let p = d.p();
    let corr = Matrix::from_fn(p, p, |i, j| {
        if i == j {
            T::one()
        } else {
            let r = cov[(i, j)] / n / (sds[i] * sds[j]);
            r.max(-T::one()).min(T::one())
        }
    });
    Ok(SpdMatrix::new(corr).expect("gram is symmetric"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(rows: &[Vec<f64>]) -> RawDataset<f64> {
        RawDataset::unnamed(Matrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn parse_simple() {
        let d: RawDataset<f64> = parse_matrix_csv("1,2\n3,4", &IngestConfig::default()).unwrap();
        assert_eq!((d.n(), d.p()), (2, 2));
        assert_eq!(d.values[(1, 0)], 3.0);
    }

    #[test]
    fn parse_header_and_semicolons() {
        let text = "\"a\";\"b\";\"c\"\n1;2;3\n4;5;6\n";
        let d: RawDataset<f64> = parse_matrix_csv(text, &IngestConfig::default()).unwrap();
        assert_eq!(d.column_names, vec!["a", "b", "c"]);
        assert_eq!(d.n(), 2);
    }

    #[test]
    fn parse_error_names_cell() {
        let err = parse_matrix_csv::<f64>("1,2\n3,abc\n", &IngestConfig::default()).unwrap_err();
        match err {
            DataError::Parse { row, col, cell } => {
                assert_eq!((row, col), (2, 2));
                assert_eq!(cell, "abc");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = parse_matrix_csv::<f64>("1,2\n3,4,5\n", &IngestConfig::default()).unwrap_err();
        assert!(matches!(err, DataError::Ragged { row: 2, expected: 2, got: 3 }));
    }

    #[test]
    fn empty_file() {
        assert!(matches!(parse_matrix_csv::<f64>("", &IngestConfig::default()), Err(DataError::EmptyData)));
        let hdr = IngestConfig { header: HeaderMode::Present, ..Default::default() };
        assert!(matches!(parse_matrix_csv::<f64>("a,b\n", &hdr), Err(DataError::EmptyData)));
    }

    #[test]
    fn standardize_examples() {
        let d = raw(&[vec![0.0, 1.0], vec![2.0, 5.0]]);
        let s = standardize(&d).unwrap();
        assert_eq!(s.values.column(0), vec![-1.0, 1.0]);
        let c = raw(&[vec![5.0, 1.0], vec![5.0, 2.0], vec![5.0, 7.0]]);
        assert!(matches!(standardize(&c), Err(DataError::ZeroVariance { col: 0, .. })));
    }

    #[test]
    fn correlation_examples() {
        let d = raw(&[vec![1.0, 1.0, -1.0], vec![2.0, 3.0, -2.0], vec![3.0, 2.0, -3.0], vec![4.0, 4.0, -4.0]]);
        let c = empirical_column_correlation(&d).unwrap();
        assert!((c[(0, 1)] - 0.8).abs() < 1e-12);
        assert!((c[(0, 2)] + 1.0).abs() < 1e-12);
        assert_eq!(c[(1, 1)], 1.0);
    }

    #[test]
    fn subsample_reproducible() {
        let d = RawDataset::unnamed(Matrix::from_fn(50, 2, |i, j| (i * 2 + j) as f64)).unwrap();
        let a = subsample_rows(&d, 10, 1).unwrap();
        let b = subsample_rows(&d, 10, 1).unwrap();
        let c = subsample_rows(&d, 10, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let all = subsample_rows(&d, 50, 3).unwrap();
        let mut firsts: Vec<f64> = all.values.column(0);
        firsts.sort_by(f64::total_cmp);
        assert_eq!(firsts, d.values.column(0));
        assert!(matches!(subsample_rows(&d, 51, 0), Err(DataError::TooManyRows { .. })));
    }
}
