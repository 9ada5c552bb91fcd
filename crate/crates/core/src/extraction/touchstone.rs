//! Touchstone 1.x reader and writer for one- and two-port S-parameters.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Samples above this magnitude are rejected as non-passive.
pub const MAX_PASSIVE_MAGNITUDE: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyUnit {
    Hz,
    KHz,
    MHz,
    #[default]
    GHz,
}

impl FrequencyUnit {
    pub fn scale(self) -> f64 {
        match self {
            FrequencyUnit::Hz => 1.0,
            FrequencyUnit::KHz => 1e3,
            FrequencyUnit::MHz => 1e6,
            FrequencyUnit::GHz => 1e9,
        }
    }

    fn token(self) -> &'static str {
        match self {
            FrequencyUnit::Hz => "Hz",
            FrequencyUnit::KHz => "kHz",
            FrequencyUnit::MHz => "MHz",
            FrequencyUnit::GHz => "GHz",
        }
    }
}

impl FromStr for FrequencyUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "HZ" => Ok(FrequencyUnit::Hz),
            "KHZ" => Ok(FrequencyUnit::KHz),
            "MHZ" => Ok(FrequencyUnit::MHz),
            "GHZ" => Ok(FrequencyUnit::GHz),
            _ => Err(format!("unknown frequency unit '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataFormat {
    /// Real and imaginary parts.
    Ri,
    /// Linear magnitude and angle in degrees.
    #[default]
    Ma,
    /// Magnitude in dB and angle in degrees.
    Db,
}

impl DataFormat {
    fn token(self) -> &'static str {
        match self {
            DataFormat::Ri => "RI",
            DataFormat::Ma => "MA",
            DataFormat::Db => "DB",
        }
    }

    fn decode(self, a: f64, b: f64) -> Complex64 {
        match self {
            DataFormat::Ri => Complex64::new(a, b),
            DataFormat::Ma => Complex64::from_polar(a, b.to_radians()),
            DataFormat::Db => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        }
    }

    fn encode(self, z: Complex64) -> (f64, f64) {
        match self {
            DataFormat::Ri => (z.re, z.im),
            DataFormat::Ma => (z.norm(), z.arg() * 180.0 / PI),
            DataFormat::Db => (20.0 * z.norm().log10(), z.arg() * 180.0 / PI),
        }
    }
}

impl FromStr for DataFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "RI" => Ok(DataFormat::Ri),
            "MA" => Ok(DataFormat::Ma),
            "DB" => Ok(DataFormat::Db),
            _ => Err(format!("unknown data format '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TouchstoneWarning {
    /// |S| above 1 but within the accepted margin.
    NonPassive { line: usize, magnitude: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TouchstoneData {
    pub ports: usize,
    /// Frequencies in Hz.
    pub frequencies: Vec<f64>,
    /// Row-major n×n S-matrix per frequency.
    pub s: Vec<Vec<Complex64>>,
    pub reference: f64,
    pub unit: FrequencyUnit,
    pub format: DataFormat,
    pub warnings: Vec<TouchstoneWarning>,
}

impl TouchstoneData {
    /// One-port data from reflection samples.
    pub fn one_port(frequencies: Vec<f64>, s11: Vec<Complex64>, reference: f64) -> Result<Self> {
        if frequencies.len() != s11.len() {
            return Err(Error::InvalidData("frequency and S11 lengths differ".into()));
        }
        Ok(Self {
            ports: 1,
            frequencies,
            s: s11.into_iter().map(|s| vec![s]).collect(),
            reference,
            unit: FrequencyUnit::Hz,
            format: DataFormat::Ri,
            warnings: Vec::new(),
        })
    }

    pub fn s_ij(&self, i: usize, j: usize) -> Vec<Complex64> {
        self.s.iter().map(|m| m[i * self.ports + j]).collect()
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

fn malformed(line: usize, message: impl Into<String>) -> Error {
    Error::Touchstone {
        line,
        message: message.into(),
    }
}

struct Options {
    unit: FrequencyUnit,
    format: DataFormat,
    reference: f64,
}

fn parse_options(tokens: &[&str], line: usize) -> Result<Options> {
    let mut opts = Options {
        unit: FrequencyUnit::default(),
        format: DataFormat::default(),
        reference: 50.0,
    };
    let mut it = tokens.iter();
    while let Some(tok) = it.next() {
        let upper = tok.to_ascii_uppercase();
        match upper.as_str() {
            "S" => {}
            "Y" | "Z" | "H" | "G" => return Err(Error::UnsupportedParameter(upper)),
            "R" => {
                let value = it
                    .next()
                    .ok_or_else(|| malformed(line, "missing reference resistance after R"))?;
                opts.reference = value
                    .parse::<f64>()
                    .ok()
                    .filter(|r| *r > 0.0 && r.is_finite())
                    .ok_or_else(|| malformed(line, format!("invalid reference resistance '{value}'")))?;
            }
            _ => {
                if let Ok(unit) = upper.parse() {
                    opts.unit = unit;
                } else if let Ok(format) = upper.parse() {
                    opts.format = format;
                } else {
                    return Err(malformed(line, format!("unknown option '{tok}'")));
                }
            }
        }
    }
    Ok(opts)
}

/// Parses Touchstone 1.x text. The port count is inferred from the number
/// of columns (3 for one port, 9 for two ports).
pub fn parse_touchstone(text: &str) -> Result<TouchstoneData> {
    let mut options: Option<Options> = None;
    let mut ports = 0;
    let mut frequencies = Vec::new();
    let mut s = Vec::new();
    let mut warnings = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('#') {
            // only the first option line counts
            if options.is_none() {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                options = Some(parse_options(&tokens, line)?);
            }
            continue;
        }
        let opts = options.get_or_insert_with(|| Options {
            unit: FrequencyUnit::default(),
            format: DataFormat::default(),
            reference: 50.0,
        });

        let values = content
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| malformed(line, format!("invalid number '{t}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let n = match values.len() {
            3 => 1,
            9 => 2,
            c => return Err(malformed(line, format!("expected 3 or 9 columns, found {c}"))),
        };
        if ports == 0 {
            ports = n;
        } else if ports != n {
            return Err(malformed(line, format!("expected {} columns", 1 + 2 * ports * ports)));
        }

        let f = values[0] * opts.unit.scale();
        if let Some(&prev) = frequencies.last() {
            if f <= prev {
                return Err(malformed(line, "frequencies must be strictly increasing"));
            }
        }
        if f < 0.0 {
            return Err(malformed(line, "negative frequency"));
        }

        let pairs: Vec<Complex64> = values[1..]
            .chunks_exact(2)
            .map(|p| opts.format.decode(p[0], p[1]))
            .collect();
        for z in &pairs {
            let magnitude = z.norm();
            if magnitude > MAX_PASSIVE_MAGNITUDE {
                return Err(malformed(line, format!("|S| = {magnitude} exceeds {MAX_PASSIVE_MAGNITUDE}")));
            }
            if magnitude > 1.0 {
                warnings.push(TouchstoneWarning::NonPassive { line, magnitude });
            }
        }
        // two-port rows are ordered S11 S21 S12 S22
        let matrix = if n == 2 {
            vec![pairs[0], pairs[2], pairs[1], pairs[3]]
        } else {
            pairs
        };
        frequencies.push(f);
        s.push(matrix);
    }

    if frequencies.is_empty() {
        return Err(Error::InvalidData("no data lines".into()));
    }
    let opts = options.expect("set by the first data line");
    Ok(TouchstoneData {
        ports,
        frequencies,
        s,
        reference: opts.reference,
        unit: opts.unit,
        format: opts.format,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WriteOptions {
    pub unit: FrequencyUnit,
    pub format: DataFormat,
    /// Overrides the data's reference resistance in the option line.
    pub reference: Option<f64>,
}

impl Default for WriteOptions {
    fn default() -> Self {
        Self {
            unit: FrequencyUnit::Hz,
            format: DataFormat::Ri,
            reference: None,
        }
    }
}

/// Serializes to Touchstone 1.x. Values use the shortest representation
/// that parses back to the same f64.
pub fn write_touchstone(data: &TouchstoneData, opts: &WriteOptions) -> String {
    let reference = opts.reference.unwrap_or(data.reference);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} S {} R {}",
        opts.unit.token(),
        opts.format.token(),
        reference
    );
    for (f, m) in data.frequencies.iter().zip(&data.s) {
        let _ = write!(out, "{:e}", f / opts.unit.scale());
        let order: &[usize] = if data.ports == 2 { &[0, 2, 1, 3] } else { &[0] };
        for &k in order {
            let (a, b) = opts.format.encode(m[k]);
            let _ = write!(out, " {a:e} {b:e}");
        }
        out.push('\n');
    }
    out
}
