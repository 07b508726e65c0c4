//! Reading observations: one number per line, or one column of a CSV file
//! with a header row. Blank lines and lines starting with `#` are skipped.

use std::path::Path;

use crate::error::CliError;

/// An observation and the 1-based line it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub line: usize,
    pub value: f64,
}

fn number(field: &str, line: usize) -> Result<f64, CliError> {
    let field = field.trim();
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(CliError::Input(format!("line {line}: `{field}` is not a finite number"))),
        Err(_) => Err(CliError::Input(format!("line {line}: `{field}` is not a number"))),
    }
}

pub fn parse_lines(text: &str) -> Result<Vec<Observation>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(Observation {
            line: i + 1,
            value: number(t, i + 1)?,
        });
    }
    Ok(out)
}

pub fn parse_csv_column(text: &str, column: &str) -> Result<Vec<Observation>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::Input(format!("CSV header: {e}")))?
        .clone();
    let idx = headers.iter().position(|h| h == column).ok_or_else(|| {
        let names: Vec<&str> = headers.iter().collect();
        CliError::Input(format!("no column `{column}` (columns: {})", names.join(", ")))
    })?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Input(format!("CSV: {e}")))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = record.get(idx).unwrap_or("");
        if field.is_empty() {
            continue;
        }
        out.push(Observation {
            line,
            value: number(field, line)?,
        });
    }
    Ok(out)
}

pub fn read_observations(path: &Path, column: Option<&str>) -> Result<Vec<Observation>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let obs = match column {
        Some(c) => parse_csv_column(&text, c)?,
        None => parse_lines(&text)?,
    };
    if obs.is_empty() {
        return Err(CliError::Input(format!("{}: no observations", path.display())));
    }
    Ok(obs)
}
