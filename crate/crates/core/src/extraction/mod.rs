//! Series-RLC extraction from one-port reflection data.
//!
//! The input impedance is moved to the slit by removing the phase of a
//! lossless feed, f0 is taken where the de-embedded reactance crosses zero,
//! L and C come from the reactance at two nearby frequencies and R is the
//! resistance at f0.

pub mod synth;
pub mod touchstone;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};

pub use touchstone::{
    parse_touchstone, write_touchstone, DataFormat, FrequencyUnit, TouchstoneData, TouchstoneWarning,
    WriteOptions,
};

/// Default relative offset of the two fit frequencies from f0.
pub const DEFAULT_FIT_OFFSET: f64 = 0.02;

/// Z = Z0 (1 + S) / (1 - S)
pub fn z_from_s(s: Complex64, z0: f64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::OpenCircuitPole);
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(z0 * (one + s) / (one - s))
}

/// S = (Z - Z0) / (Z + Z0)
pub fn s_from_z(z: Complex64, z0: f64) -> Complex64 {
    if !z.is_finite() {
        return Complex64::new(1.0, 0.0);
    }
    (z - z0) / (z + z0)
}

/// Lossless feed between the port and the slit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeembedSpec {
    /// Feed characteristic impedance (Ω).
    pub z0_feed: f64,
    /// One-way electrical length in degrees at `f_ref`.
    pub electrical_length_deg: f64,
    pub f_ref: f64,
}

impl DeembedSpec {
    pub fn new(z0_feed: f64, electrical_length_deg: f64, f_ref: f64) -> Result<Self> {
        require_positive("feed impedance", z0_feed)?;
        require_positive("reference frequency", f_ref)?;
        if !(electrical_length_deg >= 0.0) || !electrical_length_deg.is_finite() {
            return Err(Error::param(
                "electrical length",
                electrical_length_deg,
                "must be non-negative",
            ));
        }
        Ok(Self {
            z0_feed,
            electrical_length_deg,
            f_ref,
        })
    }

    /// No feed at all.
    pub fn none() -> Self {
        Self {
            z0_feed: 50.0,
            electrical_length_deg: 0.0,
            f_ref: 1.0,
        }
    }

    /// Round-trip phase 2π (θ/180) (f/f_ref) in radians.
    pub fn round_trip_phase(&self, frequency: f64) -> f64 {
        2.0 * PI * (self.electrical_length_deg / 180.0) * (frequency / self.f_ref)
    }
}

/// S' = S e^{+jφ(f)}, with S referenced to the feed impedance.
pub fn deembed(frequencies: &[f64], s11: &[Complex64], spec: &DeembedSpec) -> Vec<Complex64> {
    frequencies
        .iter()
        .zip(s11)
        .map(|(&f, &s)| s * Complex64::from_polar(1.0, spec.round_trip_phase(f)))
        .collect()
}

/// Inverse of [`deembed`].
pub fn embed(frequencies: &[f64], s11: &[Complex64], spec: &DeembedSpec) -> Vec<Complex64> {
    frequencies
        .iter()
        .zip(s11)
        .map(|(&f, &s)| s * Complex64::from_polar(1.0, -spec.round_trip_phase(f)))
        .collect()
}

/// Moves impedance samples from the port to the slit.
pub fn deembed_impedance(frequencies: &[f64], z: &[Complex64], spec: &DeembedSpec) -> Result<Vec<Complex64>> {
    if spec.electrical_length_deg == 0.0 {
        return Ok(z.to_vec());
    }
    let s: Vec<Complex64> = z.iter().map(|&z| s_from_z(z, spec.z0_feed)).collect();
    deembed(frequencies, &s, spec)
        .into_iter()
        .map(|s| z_from_s(s, spec.z0_feed))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resonance {
    pub frequency: f64,
    /// Index of the sample just below the crossing.
    pub index: usize,
    /// Every other zero crossing of the reactance in band.
    pub other_crossings: Vec<f64>,
}

/// First upward zero crossing of Im Z, linearly interpolated.
pub fn find_resonance(frequencies: &[f64], z: &[Complex64]) -> Result<Resonance> {
    check_lengths(frequencies, z)?;
    let crossing = |i: usize| {
        let (x0, x1) = (z[i].im, z[i + 1].im);
        frequencies[i] - x0 * (frequencies[i + 1] - frequencies[i]) / (x1 - x0)
    };
    let mut upward = None;
    let mut others = Vec::new();
    let mut first_downward = None;
    for i in 0..z.len().saturating_sub(1) {
        let (x0, x1) = (z[i].im, z[i + 1].im);
        if x0 < 0.0 && x1 >= 0.0 {
            if upward.is_none() {
                upward = Some(i);
            } else {
                others.push(crossing(i));
            }
        } else if x0 > 0.0 && x1 <= 0.0 {
            let f = crossing(i);
            first_downward.get_or_insert(f);
            others.push(f);
        }
    }
    match (upward, first_downward) {
        (Some(i), _) => Ok(Resonance {
            frequency: crossing(i),
            index: i,
            other_crossings: others,
        }),
        (None, Some(frequency)) => Err(Error::ParallelResonance { frequency }),
        (None, None) => Err(Error::ResonanceNotInBand),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcFit {
    pub l: f64,
    pub c: f64,
    pub f1: f64,
    pub f2: f64,
}

/// Solves X(f) = ωL - 1/(ωC) at the samples nearest f0 (1 ± offset).
pub fn fit_lc(frequencies: &[f64], z: &[Complex64], f0: f64, offset: f64) -> Result<LcFit> {
    check_lengths(frequencies, z)?;
    require_positive("resonant frequency", f0)?;
    require_positive("fit offset", offset)?;
    let i1 = nearest(frequencies, f0 * (1.0 - offset));
    let i2 = nearest(frequencies, f0 * (1.0 + offset));
    let (f1, f2) = (frequencies[i1], frequencies[i2]);
    if i1 == i2 || f1 == f2 {
        return Err(Error::SingularFit { frequency: f1 });
    }
    let (w1, w2) = (2.0 * PI * f1, 2.0 * PI * f2);
    let (x1, x2) = (z[i1].im, z[i2].im);
    // [w1  -1/w1] [L  ]   [x1]
    // [w2  -1/w2] [1/C] = [x2]
    let det = -w1 / w2 + w2 / w1;
    let l = (-x1 / w2 + x2 / w1) / det;
    let inv_c = (w1 * x2 - w2 * x1) / det;
    if !(l > 0.0 && inv_c > 0.0) {
        return Err(Error::NonSeriesRlc {
            inductance: l,
            capacitance: 1.0 / inv_c,
        });
    }
    Ok(LcFit {
        l,
        c: 1.0 / inv_c,
        f1,
        f2,
    })
}

fn nearest(frequencies: &[f64], target: f64) -> usize {
    let i = frequencies.partition_point(|&f| f < target);
    if i == 0 {
        0
    } else if i == frequencies.len() {
        i - 1
    } else if target - frequencies[i - 1] <= frequencies[i] - target {
        i - 1
    } else {
        i
    }
}

fn check_lengths(frequencies: &[f64], z: &[Complex64]) -> Result<()> {
    if frequencies.len() != z.len() {
        return Err(Error::InvalidData("frequency and impedance lengths differ".into()));
    }
    if frequencies.len() < 2 {
        return Err(Error::InvalidData("at least two samples are required".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitDiagnostics {
    pub f1: f64,
    pub f2: f64,
    /// |X_fit(f0)| / (ω0 L): how far the crossing and the L/C fit disagree.
    pub residual: f64,
    pub other_crossings: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedRlc {
    pub r: f64,
    pub l: f64,
    pub c: f64,
    pub f0: f64,
    pub q: f64,
    pub diagnostics: FitDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    /// Zero-based port whose reflection is used.
    pub port: usize,
    pub fit_offset: f64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            port: 0,
            fit_offset: DEFAULT_FIT_OFFSET,
        }
    }
}

/// Extraction from impedance samples already at the port.
pub fn extract_from_impedance(
    frequencies: &[f64],
    z: &[Complex64],
    spec: &DeembedSpec,
    fit_offset: f64,
) -> Result<ExtractedRlc> {
    let z = deembed_impedance(frequencies, z, spec)?;
    let res = find_resonance(frequencies, &z)?;
    let fit = fit_lc(frequencies, &z, res.frequency, fit_offset)?;
    let f0 = res.frequency;
    let i = res.index;
    let t = (f0 - frequencies[i]) / (frequencies[i + 1] - frequencies[i]);
    let r = z[i].re + t * (z[i + 1].re - z[i].re);
    if !(r > 0.0) {
        return Err(Error::InvalidData(format!("non-positive resistance {r} Ω at resonance")));
    }
    let w0 = 2.0 * PI * f0;
    let residual = (w0 * fit.l - 1.0 / (w0 * fit.c)).abs() / (w0 * fit.l);
    Ok(ExtractedRlc {
        r,
        l: fit.l,
        c: fit.c,
        f0,
        q: w0 * fit.l / r,
        diagnostics: FitDiagnostics {
            f1: fit.f1,
            f2: fit.f2,
            residual,
            other_crossings: res.other_crossings,
        },
    })
}

pub fn extract_rlc(data: &TouchstoneData, spec: &DeembedSpec, opts: &ExtractOptions) -> Result<ExtractedRlc> {
    if opts.port >= data.ports {
        return Err(Error::InvalidData(format!(
            "port {} not present in {}-port data",
            opts.port + 1,
            data.ports
        )));
    }
    let z = data
        .s_ij(opts.port, opts.port)
        .into_iter()
        .map(|s| z_from_s(s, data.reference))
        .collect::<Result<Vec<_>>>()?;
    extract_from_impedance(&data.frequencies, &z, spec, opts.fit_offset)
}
