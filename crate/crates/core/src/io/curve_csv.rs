//! Exclusion-curve CSV files and the long-format overlay file.
//!
//! Curve files have the header `lambda_m,alpha_limit,regime` and one row per
//! grid point in ascending λ. Numbers are written with 17 significant digits
//! so that a read gives back the identical doubles.

use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::limits::{ExclusionCurve, Regime};

pub const CURVE_HEADER: [&str; 3] = ["lambda_m", "alpha_limit", "regime"];
pub const OVERLAY_HEADER: [&str; 4] = ["source", "lambda_m", "alpha_limit", "regime"];

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema mismatch: {0}")]
    Schema(String),
}

impl CsvError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// One curve row. External curves may lack the regime column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub lambda: f64,
    pub alpha_limit: f64,
    pub regime: Option<Regime>,
}

impl From<&ExclusionCurve> for Vec<CurveRow> {
    fn from(curve: &ExclusionCurve) -> Self {
        curve
            .points
            .iter()
            .map(|p| CurveRow {
                lambda: p.lambda,
                alpha_limit: p.alpha_limit,
                regime: Some(p.regime),
            })
            .collect()
    }
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn regime_text(r: Option<Regime>) -> String {
    r.map(|r| r.to_string()).unwrap_or_default()
}

pub fn write_curve<W: Write>(rows: &[CurveRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for r in rows {
        w.write_record([
            number(r.lambda),
            number(r.alpha_limit),
            regime_text(r.regime),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct RawRow {
    lambda_m: f64,
    alpha_limit: f64,
    #[serde(default)]
    regime: Option<String>,
}

/// Reads a curve. `lambda_m` and `alpha_limit` columns are required,
/// `regime` is optional.
pub fn read_curve<R: Read>(input: R) -> Result<Vec<CurveRow>, CsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| CsvError::Schema(e.to_string()))?
        .clone();
    for required in &CURVE_HEADER[..2] {
        if !headers.iter().any(|h| h == *required) {
            return Err(CsvError::Schema(format!("missing column `{required}`")));
        }
    }
    let mut rows = Vec::new();
    for (i, record) in reader.deserialize::<RawRow>().enumerate() {
        let raw = record.map_err(|e| CsvError::Schema(format!("row {}: {e}", i + 2)))?;
        let regime = match raw.regime.as_deref() {
            None | Some("") => None,
            Some(text) => Some(
                text.parse()
                    .map_err(|e: String| CsvError::Schema(format!("row {}: {e}", i + 2)))?,
            ),
        };
        rows.push(CurveRow {
            lambda: raw.lambda_m,
            alpha_limit: raw.alpha_limit,
            regime,
        });
    }
    Ok(rows)
}

pub fn read_curve_file(path: &Path) -> Result<Vec<CurveRow>, CsvError> {
    let file = std::fs::File::open(path).map_err(|e| CsvError::io(path, e))?;
    read_curve(file)
}

/// Concatenates labelled curves into one long-format table. No interpolation.
pub fn write_overlay<W: Write>(curves: &[(&str, &[CurveRow])], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(OVERLAY_HEADER)?;
    for (source, rows) in curves {
        for r in rows.iter() {
            w.write_record([
                source.to_string(),
                number(r.lambda),
                number(r.alpha_limit),
                regime_text(r.regime),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes through a temporary file in the destination directory, then renames
/// it into place.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<(), CsvError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), csv::Error>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CsvError::io(path, e))?;
    fill(&mut tmp).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => CsvError::io(path, io),
        other => CsvError::Schema(format!("{other:?}")),
    })?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CsvError::io(path, e))?;
    tmp.persist(path).map_err(|e| CsvError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_and_digits() {
        let rows = [CurveRow {
            lambda: 1e-5,
            alpha_limit: 1.0 / 3.0,
            regime: Some(Regime::YukawaExtrapolated),
        }];
        let mut buf = Vec::new();
        write_curve(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("lambda_m,alpha_limit,regime"));
        let row = lines.next().unwrap();
        assert_eq!(
            row,
            "1.0000000000000001e-5,3.3333333333333331e-1,yukawa_extrapolated"
        );
    }

    #[test]
    fn regime_column_is_optional() {
        let rows = read_curve("lambda_m,alpha_limit\n1e-4,100\n2e-4,50\n".as_bytes()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].regime, None);
    }

    #[test]
    fn missing_column_is_schema_error() {
        let err = read_curve("lambda,alpha\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CsvError::Schema(_)));
        let err = read_curve("lambda_m,alpha_limit,regime\n1,2,weird\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CsvError::Schema(_)));
        let err = read_curve("lambda_m,alpha_limit\nx,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CsvError::Schema(_)));
    }

    #[test]
    fn overlay_concatenates() {
        let a = [CurveRow {
            lambda: 1e-4,
            alpha_limit: 2.0,
            regime: Some(Regime::Native),
        }];
        let b = [CurveRow {
            lambda: 1e-4,
            alpha_limit: 3.0,
            regime: None,
        }];
        let mut buf = Vec::new();
        write_overlay(&[("ours", &a), ("external", &b)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "source,lambda_m,alpha_limit,regime");
        assert!(lines[1].starts_with("ours,"));
        assert!(lines[2].starts_with("external,") && lines[2].ends_with(','));
    }

    fn regime() -> impl Strategy<Value = Option<Regime>> {
        prop_oneof![
            Just(None),
            Just(Some(Regime::Native)),
            Just(Some(Regime::YukawaExtrapolated))
        ]
    }

    proptest! {
        #[test]
        fn write_read_is_identity(
            raw in prop::collection::vec((1e-12f64..1.0, 1e-300f64..1e300, regime()), 0..40)
        ) {
            let rows: Vec<CurveRow> = raw
                .into_iter()
                .map(|(lambda, alpha_limit, regime)| CurveRow { lambda, alpha_limit, regime })
                .collect();
            let mut buf = Vec::new();
            write_curve(&rows, &mut buf).unwrap();
            prop_assert_eq!(read_curve(buf.as_slice()).unwrap(), rows);
        }
    }
}
