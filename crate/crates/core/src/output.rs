//! Deterministic machine-readable output: CSV (RFC-4180-style, `\n`
//! line endings) and JSON Lines. No timestamps, no locale formatting;
//! identical inputs produce byte-identical files.

use std::io::{self, Write};

/// Floats are serialized with 17 significant digits so that every
/// double round-trips exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    JsonLines,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Self::Csv),
            "jsonl" => Some(Self::JsonLines),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::JsonLines => "jsonl",
        }
    }
}

/// Quotes a CSV field when it contains a separator, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes a table of named float columns in the requested format.
pub fn write_table<W: Write>(
    mut w: W,
    format: OutputFormat,
    columns: &[&str],
    rows: &[Vec<f64>],
) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            let header: Vec<String> = columns.iter().map(|c| csv_field(c)).collect();
            write!(w, "{}\n", header.join(","))?;
            for row in rows {
                debug_assert_eq!(row.len(), columns.len());
                let cells: Vec<String> = row.iter().map(|&x| fmt_float(x)).collect();
                write!(w, "{}\n", cells.join(","))?;
            }
        }
        OutputFormat::JsonLines => {
            for row in rows {
                debug_assert_eq!(row.len(), columns.len());
                let fields: Vec<String> = columns
                    .iter()
                    .zip(row)
                    .map(|(c, &x)| format!("\"{c}\":{}", fmt_float(x)))
                    .collect();
                write!(w, "{{{}}}\n", fields.join(","))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_round_trip() {
        for x in [0.1, -3.5e-17, 1.0 / 3.0, 9.90909090909e-1] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_table(
            &mut buf,
            OutputFormat::Csv,
            &["omega", "value"],
            &[vec![0.0, 1.0], vec![0.5, 2.0]],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("omega,value\n"));
        assert_eq!(text.lines().count(), 3);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn jsonl_layout() {
        let mut buf = Vec::new();
        write_table(
            &mut buf,
            OutputFormat::JsonLines,
            &["omega", "value"],
            &[vec![0.25, 1.0]],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("{\"omega\":2.5"));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
