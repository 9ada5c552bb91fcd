//! Effective series resistance added by a lossy feedline between the source
//! and a resonator.
//!
//! The feedline is split into a lossless line plus a series resistance
//! R_EFF = 2 P_feed / |I2|², where I2 is the current delivered to the load.

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};
use crate::tline::TLineParams;

/// Attenuation beyond which cosh/sinh of γl are no longer evaluated.
pub const MAX_NEPERS: f64 = 50.0;

/// Guard thresholds for the simplified form: |Z0''| / Z0', p / |q| and
/// R_IN / |Z0|.
pub const REACTIVE_Z0_LIMIT: f64 = 0.05;
pub const TANH_RATIO_LIMIT: f64 = 0.2;
pub const LOAD_RESISTANCE_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedlineSpec {
    pub gamma: Complex64,
    pub z0: Complex64,
    pub length: f64,
}

impl FeedlineSpec {
    pub fn new(gamma: Complex64, z0: Complex64, length: f64) -> Result<Self> {
        if !(gamma.re >= 0.0) || !gamma.im.is_finite() {
            return Err(Error::param("attenuation constant", gamma.re, "must be non-negative"));
        }
        require_positive("Re Z0", z0.re)?;
        require_positive("feedline length", length)?;
        Ok(Self { gamma, z0, length })
    }

    pub fn from_line(line: &TLineParams, length: f64) -> Result<Self> {
        Self::new(line.gamma, line.z0_complex, length)
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(self.gamma, self.z0, length)
    }

    pub fn lossless(&self) -> bool {
        self.gamma.re == 0.0 && self.z0.im == 0.0
    }

    fn gamma_l(&self) -> Result<Complex64> {
        let gl = self.gamma * self.length;
        if gl.re > MAX_NEPERS {
            return Err(Error::FeedlineTooLossy { nepers: gl.re });
        }
        Ok(gl)
    }

    pub fn tanh_decomposition(&self) -> Result<TanhDecomposition> {
        let t = self.gamma_l()?.tanh();
        Ok(TanhDecomposition { p: t.re, q: t.im })
    }
}

/// tanh(γl) = p + jq
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TanhDecomposition {
    pub p: f64,
    pub q: f64,
}

impl TanhDecomposition {
    pub fn norm_sqr(&self) -> f64 {
        self.p * self.p + self.q * self.q
    }
}

/// Load at the far end of the feedline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadPoint {
    pub z_in: Complex64,
}

impl LoadPoint {
    pub fn new(r_in: f64, x_in: f64) -> Result<Self> {
        if !(r_in >= 0.0) || !x_in.is_finite() {
            return Err(Error::param("load resistance", r_in, "must be non-negative"));
        }
        Ok(Self {
            z_in: Complex64::new(r_in, x_in),
        })
    }

    pub fn reactive(x_in: f64) -> Self {
        Self {
            z_in: Complex64::new(0.0, x_in),
        }
    }
}

/// I1 / I2 = (Z_IN / Z0) sinh(γl) + cosh(γl)
pub fn current_ratio(feed: &FeedlineSpec, load: &LoadPoint) -> Result<Complex64> {
    let gl = feed.gamma_l()?;
    Ok(load.z_in / feed.z0 * gl.sinh() + gl.cosh())
}

/// Input impedance V1/I1 of the loaded line.
pub fn input_impedance(feed: &FeedlineSpec, load: &LoadPoint) -> Result<Complex64> {
    let t = feed.gamma_l()?.tanh();
    let z0 = feed.z0;
    Ok(z0 * (load.z_in + z0 * t) / (z0 + load.z_in * t))
}

/// R_EFF = |I1/I2|² Re{V1/I1} - R_IN
pub fn reff_exact(feed: &FeedlineSpec, load: &LoadPoint) -> Result<f64> {
    let ratio = current_ratio(feed, load)?;
    let z1 = input_impedance(feed, load)?;
    Ok(ratio.norm_sqr() * z1.re - load.z_in.re)
}

/// Numerator g(Z_IN) of Re{V1/I1}.
pub fn g_function(feed: &FeedlineSpec, load: &LoadPoint) -> Result<f64> {
    let TanhDecomposition { p, q } = feed.tanh_decomposition()?;
    let t2 = p * p + q * q;
    let (z0r, z0i) = (feed.z0.re, feed.z0.im);
    let z0_2 = feed.z0.norm_sqr();
    let (r, x) = (load.z_in.re, load.z_in.im);
    let zin_2 = r * r + x * x;
    Ok(r * z0_2 + t2 * r * (z0r * z0r - z0i * z0i) + z0r * p * (zin_2 + z0_2)
        + 2.0 * z0r * z0i * x * t2
        - z0i * q * (z0_2 - r * r - x * x))
}

/// R_EFF ≈ g(Z_IN) |cosh(γl)|² / |Z0|², valid for Z0'' ≪ Z0', p ≪ q and
/// R_IN ≈ 0 (see [`simplification_warnings`]).
pub fn reff_simplified(feed: &FeedlineSpec, load: &LoadPoint) -> Result<f64> {
    let cosh = feed.gamma_l()?.cosh();
    Ok(g_function(feed, load)? * cosh.norm_sqr() / feed.z0.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimplificationWarning {
    ReactiveZ0 { ratio: f64 },
    LossyTanh { ratio: f64 },
    ResistiveLoad { ratio: f64 },
}

/// Assumptions of [`reff_simplified`] that this feed and load violate.
pub fn simplification_warnings(
    feed: &FeedlineSpec,
    load: &LoadPoint,
) -> Result<Vec<SimplificationWarning>> {
    let TanhDecomposition { p, q } = feed.tanh_decomposition()?;
    let mut out = Vec::new();
    let z0_ratio = feed.z0.im.abs() / feed.z0.re;
    if z0_ratio > REACTIVE_Z0_LIMIT {
        out.push(SimplificationWarning::ReactiveZ0 { ratio: z0_ratio });
    }
    if p > TANH_RATIO_LIMIT * q.abs() {
        out.push(SimplificationWarning::LossyTanh { ratio: p / q.abs() });
    }
    let r_ratio = load.z_in.re / feed.z0.norm();
    if r_ratio > LOAD_RESISTANCE_LIMIT {
        out.push(SimplificationWarning::ResistiveLoad { ratio: r_ratio });
    }
    Ok(out)
}

/// Load reactance minimizing [`reff_simplified`]:
/// X = -Z0'' |tanh γl|² / (p + (Z0''/Z0') q).
///
/// This is the stationary point of g(X). Returns 0 when g does not depend
/// on X at all and [`Error::NoReactanceMinimum`] when g is not convex in X.
pub fn x_in_min(feed: &FeedlineSpec) -> Result<f64> {
    let d = feed.tanh_decomposition()?;
    let numerator = -feed.z0.im * d.norm_sqr();
    let denominator = d.p + feed.z0.im / feed.z0.re * d.q;
    stationary_point(numerator, denominator)
}

/// Variant of [`x_in_min`] normalising Z0'' by |Z0| instead of Z0'. The two
/// coincide when Z0'' = 0 and differ by O((Z0''/Z0')²) otherwise.
pub fn x_in_min_modulus(feed: &FeedlineSpec) -> Result<f64> {
    let d = feed.tanh_decomposition()?;
    let numerator = -feed.z0.im * d.norm_sqr();
    let denominator = d.p + feed.z0.im / feed.z0.norm() * d.q;
    stationary_point(numerator, denominator)
}

fn stationary_point(numerator: f64, denominator: f64) -> Result<f64> {
    let scale = numerator.abs().max(1.0) * f64::EPSILON;
    if denominator.abs() <= scale {
        return if numerator.abs() <= scale {
            Ok(0.0)
        } else {
            Err(Error::NoReactanceMinimum)
        };
    }
    if denominator < 0.0 {
        return Err(Error::NoReactanceMinimum);
    }
    Ok(numerator / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReffRow {
    pub x_in: f64,
    pub exact: f64,
    pub simplified: f64,
}

/// R_EFF for a purely reactive load over a grid of X_IN.
pub fn reff_curve(feed: &FeedlineSpec, x_grid: &[f64]) -> Result<Vec<ReffRow>> {
    if x_grid.is_empty() {
        return Err(Error::InvalidData("empty reactance grid".into()));
    }
    x_grid
        .iter()
        .map(|&x| {
            let load = LoadPoint::reactive(x);
            Ok(ReffRow {
                x_in: x,
                exact: reff_exact(feed, &load)?,
                simplified: reff_simplified(feed, &load)?,
            })
        })
        .collect()
}
