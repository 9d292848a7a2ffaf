//! File formats: CSV point sets, JSON instances and reports, TSV frontier
//! samples. Rationals are written as `"a/b"` strings everywhere.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::connectivity::ConnectivityReport;
use crate::error::Error;
use crate::numerics::rational_parse;
use crate::order::{Point, PointSet};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {source}")]
    Value { line: usize, source: Error },
}

/// Reads a point set whose header is `y1,...,yp`.
pub fn read_points_csv<R: Read>(reader: R) -> Result<PointSet, FormatError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| FormatError::Csv(e.to_string()))?
        .clone();
    for (j, name) in header.iter().enumerate() {
        if name != format!("y{}", j + 1) {
            return Err(FormatError::Csv(format!(
                "expected header y1,...,yp, found {name:?} in column {}",
                j + 1
            )));
        }
    }
    if header.is_empty() {
        return Err(FormatError::Csv("empty header".into()));
    }
    let mut points = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| FormatError::Csv(e.to_string()))?;
        let line = i + 2;
        let coords = record
            .iter()
            .map(rational_parse)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|source| FormatError::Value { line, source })?;
        if coords.len() != header.len() {
            return Err(FormatError::Value {
                line,
                source: Error::DimensionMismatch {
                    expected: header.len(),
                    found: coords.len(),
                },
            });
        }
        points.push(Point::new(coords));
    }
    PointSet::new(points).map_err(|source| FormatError::Value { line: 0, source })
}

pub fn write_points_csv<W: Write>(set: &PointSet, writer: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| FormatError::Csv(e.to_string());
    w.write_record((1..=set.dim()).map(|j| format!("y{j}")))
        .map_err(csv_err)?;
    for p in set.iter() {
        w.write_record(p.coords().iter().map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned, R: Read>(reader: R) -> Result<T, FormatError> {
    Ok(serde_json::from_reader(reader)?)
}

/// Pretty-printed JSON with a trailing newline. Output depends only on the
/// value, so equal reports are byte-identical.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    s.push('\n');
    s
}

/// One row per sample: coordinates followed by the component id.
pub fn write_connectivity_tsv<W: Write>(
    report: &ConnectivityReport,
    mut writer: W,
) -> Result<(), FormatError> {
    let dim = report.samples.first().map_or(0, Point::dim);
    let mut header: Vec<String> = (1..=dim).map(|j| format!("y{j}")).collect();
    header.push("component".into());
    writeln!(writer, "{}", header.join("\t"))?;
    for (y, c) in report.samples.iter().zip(&report.components) {
        let mut row: Vec<String> = y.coords().iter().map(|v| v.to_string()).collect();
        row.push(c.to_string());
        writeln!(writer, "{}", row.join("\t"))?;
    }
    Ok(())
}
