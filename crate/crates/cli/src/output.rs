use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;

use clap::ValueEnum;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Report,
}

/// CSV number: nine significant digits in scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:.8e}")
}

const PREFIXES: [(i32, &str); 9] = [
    (-15, "f"),
    (-12, "p"),
    (-9, "n"),
    (-6, "µ"),
    (-3, "m"),
    (0, ""),
    (3, "k"),
    (6, "M"),
    (9, "G"),
];

/// Report number with an SI prefix and five significant digits.
pub fn si(value: f64, unit: &str) -> String {
    if !value.is_finite() || value == 0.0 {
        return format!("{value} {unit}");
    }
    let exp = ((value.abs().log10() / 3.0).floor() as i32 * 3).clamp(-15, 9);
    let prefix = PREFIXES.iter().find(|(e, _)| *e == exp).map_or("", |(_, p)| p);
    let scaled = value / 10f64.powi(exp);
    format!("{} {prefix}{unit}", significant(scaled, 5))
}

/// Plain number with `digits` significant digits and a unit suffix.
pub fn plain(value: f64, digits: usize, unit: &str) -> String {
    if unit.is_empty() {
        significant(value, digits)
    } else {
        format!("{} {unit}", significant(value, digits))
    }
}

fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = row.iter().map(|c| escape(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Aligned `label value` lines for human-readable reports.
#[derive(Debug, Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn heading(&mut self, text: impl AsRef<str>) {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        self.text.push_str(text.as_ref());
        self.text.push('\n');
    }

    pub fn field(&mut self, label: &str, value: impl AsRef<str>) {
        let _ = writeln!(self.text, "  {label:<24} {}", value.as_ref());
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.text, "  {}", text.as_ref());
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Where command results go: stdout in the chosen format, plus a CSV file
/// when an output directory is set.
#[derive(Debug, Clone)]
pub struct Sink {
    pub format: Format,
    pub directory: Option<PathBuf>,
}

impl Sink {
    pub fn emit(&self, stem: &str, report: String, csv: &Csv) -> CliResult<()> {
        let text = match self.format {
            Format::Csv => csv.render(),
            Format::Report => report,
        };
        let mut stdout = io::stdout().lock();
        match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                return Err(CliError::Output {
                    path: "stdout".to_string(),
                    source: e,
                })
            }
            _ => {}
        }
        if let Some(dir) = &self.directory {
            let path = dir.join(format!("{}.csv", file_stem(stem)));
            let wrap = |source| CliError::Output {
                path: path.display().to_string(),
                source,
            };
            fs::create_dir_all(dir).map_err(wrap)?;
            fs::write(&path, csv.render()).map_err(wrap)?;
        }
        Ok(())
    }
}

fn file_stem(stem: &str) -> String {
    stem.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_numbers_have_nine_significant_digits() {
        assert_eq!(num(29.18394e6), "2.91839400e7");
        assert_eq!(num(-0.5), "-5.00000000e-1");
    }

    #[test]
    fn si_prefixes() {
        assert_eq!(si(29.184e6, "Hz"), "29.184 MHz");
        assert_eq!(si(0.3642e-6, "H"), "364.20 nH");
        assert_eq!(si(81.67e-12, "F"), "81.670 pF");
        assert_eq!(si(0.1345, "Ω"), "134.50 mΩ");
        assert_eq!(si(50.0, "Ω"), "50.000 Ω");
    }

    #[test]
    fn csv_quotes_cells_with_commas() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.push(vec!["1".into(), "x, y".into()]);
        assert_eq!(csv.render(), "a,b\n1,\"x, y\"\n");
    }
}
