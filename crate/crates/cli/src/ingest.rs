//! Reading a price or return column from a CSV file.

use std::fs::File;
use std::path::Path;

use crate::error::{CliError, Result};

/// What the selected column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SeriesKind {
    /// Prices; log-returns are formed from consecutive rows.
    Prices,
    /// Returns, used as they are.
    Returns,
}

/// Column conventions of a known export format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    /// Yahoo Finance history export: `Date` and `Adj Close`.
    YahooCsv,
}

impl InputFormat {
    pub fn value_column(self) -> &'static str {
        match self {
            InputFormat::YahooCsv => "Adj Close",
        }
    }

    pub fn date_column(self) -> &'static str {
        match self {
            InputFormat::YahooCsv => "Date",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub values: Vec<f64>,
    /// Name of the source column.
    pub label: String,
    /// Path the series was read from.
    pub source: String,
    /// Rows skipped because a needed cell was blank.
    pub dropped_rows: usize,
}

fn is_missing(cell: &str) -> bool {
    matches!(cell.trim(), "" | "null" | "NA" | "NaN" | "nan")
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| CliError::MissingColumn(name.to_string()))
}

/// Read `column` from a header-bearing CSV file. Rows whose value (or date,
/// when `date_column` is given) is blank are dropped and counted. Row numbers
/// in errors count data rows from 1.
pub fn ingest_csv(
    path: &Path,
    column: &str,
    kind: SeriesKind,
    date_column: Option<&str>,
) -> Result<ReturnSeries> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(file);
    let headers = reader.headers()?.clone();
    let col = column_index(&headers, column)?;
    let date_col = date_column.map(|d| column_index(&headers, d)).transpose()?;

    let mut raw = Vec::new();
    let mut dropped = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let cell = record.get(col).unwrap_or("");
        let date_missing = date_col.is_some_and(|d| is_missing(record.get(d).unwrap_or("")));
        if is_missing(cell) || date_missing {
            dropped += 1;
            continue;
        }
        let value: f64 = cell.trim().parse().map_err(|_| CliError::BadNumber {
            row,
            value: cell.to_string(),
        })?;
        if !value.is_finite() {
            return Err(CliError::BadNumber {
                row,
                value: cell.to_string(),
            });
        }
        if kind == SeriesKind::Prices && value <= 0.0 {
            return Err(CliError::NonPositivePrice(row));
        }
        raw.push(value);
    }

    let values = match kind {
        SeriesKind::Returns => raw,
        SeriesKind::Prices => {
            if raw.len() < 2 {
                return Err(CliError::FewerThanTwoPrices);
            }
            log_returns(&raw)
        }
    };
    Ok(ReturnSeries {
        values,
        label: column.to_string(),
        source: path.display().to_string(),
        dropped_rows: dropped,
    })
}

/// rᵢ = ln(pᵢ₊₁ / pᵢ).
pub fn log_returns(prices: &[f64]) -> Vec<f64> {
    prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn returns_from_prices() {
        assert_eq!(log_returns(&[100.0, 110.0]), vec![1.1f64.ln()]);
        assert_eq!(log_returns(&[100.0, 100.0, 100.0]), vec![0.0, 0.0]);
    }
}
