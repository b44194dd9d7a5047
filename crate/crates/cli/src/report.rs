//! Report emission: flat CSV for sweeps, JSON for structured results,
//! written to a file or stdout. Floats are printed with 17 significant
//! digits so every value round-trips exactly.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;

/// 17-significant-digit scientific notation: enough to reconstruct the
/// exact f64 bit pattern on parse.
pub fn float17(v: f64) -> String {
    format!("{v:.16e}")
}

/// A flat table: one header row plus data rows of pre-formatted cells.
#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Comma-separated encoding with a header line. Cells are numeric or
    /// hex tokens, so no quoting is ever needed.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// The same table as a JSON array of row objects.
    pub fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    self.headers
                        .iter()
                        .zip(row)
                        .map(|(h, cell)| {
                            // The config hash is a hex token: an unlucky
                            // all-digit hash must not change type.
                            let value = if *h == "config" {
                                Value::String(cell.clone())
                            } else {
                                cell_to_json(cell)
                            };
                            ((*h).to_string(), value)
                        })
                        .collect::<serde_json::Map<_, _>>()
                        .into()
                })
                .collect(),
        )
    }
}

/// Cells are formatted strings; recover numbers where they parse so JSON
/// consumers see numerics, falling back to the raw token (config hashes).
fn cell_to_json(cell: &str) -> Value {
    if let Ok(n) = cell.parse::<u64>() {
        return n.into();
    }
    if let Ok(x) = cell.parse::<f64>() {
        if x.is_finite() {
            return x.into();
        }
    }
    Value::String(cell.to_string())
}

/// Writes the report to `path` when given, stdout otherwise.
pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float17_round_trips_exactly() {
        for v in [
            1.0,
            core::f64::consts::PI,
            -2.2250738585072014e-308,
            9.9e300,
            0.1 + 0.2,
        ] {
            let text = float17(v);
            assert_eq!(text.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{text}");
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut table = Table::new(vec!["config", "t", "value"]);
        table.push(vec!["abc".into(), float17(1.0), float17(2.5)]);
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("config,t,value"));
        assert_eq!(lines.next(), Some("abc,1.0000000000000000e0,2.5000000000000000e0"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn json_rows_recover_numbers() {
        let mut table = Table::new(vec!["config", "n", "x"]);
        table.push(vec!["00ff".into(), "7".into(), float17(0.5)]);
        let rows = table.to_json_rows();
        assert_eq!(rows[0]["config"], "00ff");
        assert_eq!(rows[0]["n"], 7);
        assert_eq!(rows[0]["x"], 0.5);
    }
}
