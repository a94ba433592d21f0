use std::io::BufRead;
use std::path::Path;

use crate::error::FitError;

/// One observation of a time series: absolute time in seconds and a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub time_s: f64,
    pub value: f64,
}

/// Read samples from CSV text with the header `time_s,value`.
///
/// Times must be monotone non-decreasing; the decimal separator is `.`.
pub fn samples_from_csv<R: BufRead>(reader: R) -> Result<Vec<Sample>, FitError> {
    let mut samples = Vec::new();
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| FitError::Csv {
        line: 1,
        message: "empty file, expected header time_s,value".into(),
    })?;
    let header = header.map_err(|e| FitError::Csv {
        line: 1,
        message: e.to_string(),
    })?;
    let cols: Vec<&str> = header.trim().split(',').map(str::trim).collect();
    if cols != ["time_s", "value"] {
        return Err(FitError::Csv {
            line: 1,
            message: format!("expected header `time_s,value`, got `{}`", header.trim()),
        });
    }
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| FitError::Csv {
            line: line_no,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split(',');
        let time_s = parse_field(fields.next(), "time_s", line_no)?;
        let value = parse_field(fields.next(), "value", line_no)?;
        if fields.next().is_some() {
            return Err(FitError::Csv {
                line: line_no,
                message: "expected exactly two columns".into(),
            });
        }
        if let Some(prev) = samples.last() {
            let prev: &Sample = prev;
            if time_s < prev.time_s {
                return Err(FitError::Csv {
                    line: line_no,
                    message: format!("time {} decreases below {}", time_s, prev.time_s),
                });
            }
        }
        samples.push(Sample { time_s, value });
    }
    Ok(samples)
}

pub fn samples_from_csv_file<P: AsRef<Path>>(path: P) -> Result<Vec<Sample>, FitError> {
    let file = std::fs::File::open(path.as_ref()).map_err(|e| FitError::Csv {
        line: 0,
        message: format!("{}: {}", path.as_ref().display(), e),
    })?;
    samples_from_csv(std::io::BufReader::new(file))
}

fn parse_field(field: Option<&str>, name: &str, line: usize) -> Result<f64, FitError> {
    let raw = field.ok_or_else(|| FitError::Csv {
        line,
        message: format!("missing {name} column"),
    })?;
    let v: f64 = raw.trim().parse().map_err(|_| FitError::Csv {
        line,
        message: format!("cannot parse {name} value `{}`", raw.trim()),
    })?;
    if !v.is_finite() {
        return Err(FitError::Csv {
            line,
            message: format!("{name} value must be finite"),
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn parses_simple_csv() {
        let csv = "time_s,value\n0,1.5\n300,2.5\n600,3\n";
        let s = samples_from_csv(Cursor::new(csv)).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1].time_s, 300.0);
        assert_eq!(s[2].value, 3.0);
    }

    #[test]
    fn rejects_bad_header() {
        let err = samples_from_csv(Cursor::new("t,v\n0,1\n")).unwrap_err();
        assert!(matches!(err, FitError::Csv { line: 1, .. }));
    }

    #[test]
    fn rejects_decreasing_time_with_line_number() {
        let err = samples_from_csv(Cursor::new("time_s,value\n0,1\n600,1\n300,1\n")).unwrap_err();
        assert!(matches!(err, FitError::Csv { line: 4, .. }));
    }

    #[test]
    fn rejects_garbage_value() {
        let err = samples_from_csv(Cursor::new("time_s,value\n0,abc\n")).unwrap_err();
        assert!(matches!(err, FitError::Csv { line: 2, .. }));
    }
}
