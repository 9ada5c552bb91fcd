//! Two magnetically coupled loop resonators.
//!
//! Each loop is a series RLC; the loops share a mutual inductance M. Loop 1
//! is driven, loop 2 is terminated in Z_L.

mod elliptic;
mod lmatch;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use elliptic::complete_elliptic;
pub use lmatch::{Element, LMatch, Topology};

use crate::constants::MU0;
use crate::error::{require_positive, Error, Result};
use crate::feedline::{reff_exact, FeedlineSpec, LoadPoint};
use crate::resonator::{LoopGeometry, LoopRlc};
use crate::tline::{rlgc, Conductor, CrossSection, Dielectric};

/// Default reference resistance for matching networks.
pub const DEFAULT_SOURCE_RESISTANCE: f64 = 50.0;
/// Default sweep resolution.
pub const DEFAULT_FREQUENCY_STEP: f64 = 10e3;

const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Mutual inductance of two coaxial circular filaments of radii `a1`, `a2`
/// a distance `d` apart (Maxwell's formula).
pub fn mutual_inductance_coaxial(a1: f64, a2: f64, d: f64) -> Result<f64> {
    require_positive("loop radius", a1)?;
    require_positive("loop radius", a2)?;
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::param("loop separation", d, "must be non-negative"));
    }
    if d == 0.0 && a1 == a2 {
        return Err(Error::CoincidentLoops);
    }
    let k2 = 4.0 * a1 * a2 / ((a1 + a2).powi(2) + d * d);
    let k = k2.sqrt();
    let (kk, ee) = complete_elliptic(k);
    Ok(MU0 * (a1 * a2).sqrt() * ((2.0 / k - k) * kk - 2.0 / k * ee))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPair {
    pub loop1: LoopRlc,
    pub loop2: LoopRlc,
    pub mutual: f64,
    /// Coaxial separation, when M was derived from geometry.
    pub distance: Option<f64>,
}

impl CoupledPair {
    pub fn new(loop1: LoopRlc, loop2: LoopRlc, mutual: f64) -> Result<Self> {
        if !(mutual >= 0.0) || !mutual.is_finite() {
            return Err(Error::param("mutual inductance", mutual, "must be non-negative"));
        }
        let k = mutual / (loop1.l * loop2.l).sqrt();
        if k >= 1.0 {
            return Err(Error::CouplingTooStrong { k });
        }
        Ok(Self {
            loop1,
            loop2,
            mutual,
            distance: None,
        })
    }

    /// Pair of coaxial loops with M from their mean radii.
    pub fn coaxial(loop1: LoopRlc, loop2: LoopRlc, a1: f64, a2: f64, distance: f64) -> Result<Self> {
        let m = mutual_inductance_coaxial(a1, a2, distance)?;
        let mut pair = Self::new(loop1, loop2, m)?;
        pair.distance = Some(distance);
        Ok(pair)
    }

    /// Two copies of one loop.
    pub fn symmetric(rlc: LoopRlc, mutual: f64) -> Result<Self> {
        Self::new(rlc.clone(), rlc, mutual)
    }

    pub fn coupling_coefficient(&self) -> f64 {
        self.mutual / (self.loop1.l * self.loop2.l).sqrt()
    }

    pub fn is_symmetric(&self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= SYMMETRY_TOLERANCE * a.abs().max(b.abs());
        close(self.loop1.r, self.loop2.r)
            && close(self.loop1.l, self.loop2.l)
            && close(self.loop1.c, self.loop2.c)
    }

    fn require_symmetric(&self) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::AsymmetricPair)
        }
    }

    pub fn with_resistance(&self, r: f64) -> Result<Self> {
        let mut pair = self.clone();
        pair.loop1.r = require_positive("resistance", r)?;
        pair.loop2.r = r;
        Ok(pair)
    }

    /// Open-circuit impedance matrix.
    pub fn z_matrix(&self, frequency: f64) -> [[Complex64; 2]; 2] {
        let zm = Complex64::new(0.0, 2.0 * PI * frequency * self.mutual);
        [
            [self.loop1.impedance(frequency), zm],
            [zm, self.loop2.impedance(frequency)],
        ]
    }

    /// Scattering matrix referenced to a real impedance on both ports.
    pub fn s_matrix(&self, frequency: f64, reference: f64) -> [[Complex64; 2]; 2] {
        let z = self.z_matrix(frequency);
        let r = Complex64::new(reference, 0.0);
        let (a, b, c, d) = (z[0][0], z[0][1], z[1][0], z[1][1]);
        let det = (a + r) * (d + r) - b * c;
        [
            [((a - r) * (d + r) - b * c) / det, 2.0 * b * r / det],
            [2.0 * c * r / det, ((a + r) * (d - r) - b * c) / det],
        ]
    }

    /// Z_IN = R1 + jX1 + (ωM)² / (R2 + jX2 + Z_L)
    pub fn input_impedance(&self, z_l: Complex64, frequency: f64) -> Complex64 {
        let wm = 2.0 * PI * frequency * self.mutual;
        self.loop1.impedance(frequency) + wm * wm / (self.loop2.impedance(frequency) + z_l)
    }

    /// Termination maximizing η for a symmetric pair:
    /// Z_L = sqrt(R² + (ωM)²) - jX.
    pub fn optimal_termination(&self, frequency: f64) -> Result<Complex64> {
        self.require_symmetric()?;
        let wm = 2.0 * PI * frequency * self.mutual;
        let r = self.loop1.r;
        Ok(Complex64::new(r.hypot(wm), -self.loop1.reactance(frequency)))
    }

    /// Returns (η′, η). η is the fraction of the power entering loop 1
    /// that reaches R_L; η′ also accounts for the mismatch at the source.
    pub fn efficiency(&self, term: &Termination, frequency: f64) -> (f64, f64) {
        let wm2 = (2.0 * PI * frequency * self.mutual).powi(2);
        let r_l = term.z_l.re;
        let denom = self.loop1.r * (self.loop2.impedance(frequency) + term.z_l).norm_sqr()
            + wm2 * (self.loop2.r + r_l);
        let eta = if denom > 0.0 { r_l * wm2 / denom } else { 0.0 };
        let gamma = term.reflection(self.input_impedance(term.z_l, frequency));
        ((1.0 - gamma.norm_sqr()) * eta, eta)
    }
}

/// Load and source impedances on either side of the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Termination {
    pub z_l: Complex64,
    pub z_s: Complex64,
}

impl Termination {
    pub fn new(z_l: Complex64, z_s: Complex64) -> Result<Self> {
        if !(z_l.re >= 0.0) {
            return Err(Error::param("load resistance", z_l.re, "must be non-negative"));
        }
        if !(z_s.re >= 0.0) {
            return Err(Error::param("source resistance", z_s.re, "must be non-negative"));
        }
        Ok(Self { z_l, z_s })
    }

    /// Source conjugate-matched to `z_in`.
    pub fn conjugate_source(z_l: Complex64, z_in: Complex64) -> Self {
        Self { z_l, z_s: z_in.conj() }
    }

    /// Power-wave reflection Γ = (Z_IN - Z_S*) / (Z_IN + Z_S).
    pub fn reflection(&self, z_in: Complex64) -> Complex64 {
        let denom = z_in + self.z_s;
        if denom.norm() == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        (z_in - self.z_s.conj()) / denom
    }
}

/// Input feedline whose loss is added to each loop's series resistance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedAttachment {
    pub cross_section: CrossSection,
    pub dielectric: Dielectric,
    pub conductor: Conductor,
    pub length: f64,
}

impl FeedAttachment {
    pub fn from_geometry(g: &LoopGeometry) -> Self {
        Self {
            cross_section: g.cross_section,
            dielectric: g.dielectric,
            conductor: g.conductor,
            length: g.feed_length(),
        }
    }

    /// Total loop resistance at `frequency`: the feedless resistance of
    /// `rlc` plus R_EFF of the feed loaded by the rest of the resonator.
    pub fn loop_resistance(&self, rlc: &LoopRlc, frequency: f64) -> Result<f64> {
        let line = rlgc(&self.cross_section, &self.dielectric, &self.conductor, frequency)?;
        let feed = FeedlineSpec::from_line(&line, self.length)?;
        let core = rlc.resistance_without_feed();
        let load = LoadPoint::new(core, rlc.reactance(frequency))?;
        Ok(core + reff_exact(&feed, &load)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyCurve {
    pub frequencies: Vec<f64>,
    pub eta_prime: Vec<f64>,
    pub eta: Vec<f64>,
    pub z_l: Vec<Complex64>,
    pub peak: f64,
    pub peak_frequency: f64,
    /// 3-dB width of η′, absent when the curve does not fall to half its
    /// peak on both sides within the grid.
    pub bandwidth: Option<f64>,
}

impl EfficiencyCurve {
    fn from_points(frequencies: Vec<f64>, eta_prime: Vec<f64>, eta: Vec<f64>, z_l: Vec<Complex64>) -> Self {
        let (i_peak, peak) = eta_prime
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        let bandwidth = half_power_width(&frequencies, &eta_prime, i_peak);
        Self {
            peak_frequency: frequencies[i_peak],
            frequencies,
            eta_prime,
            eta,
            z_l,
            peak,
            bandwidth,
        }
    }
}

fn half_power_width(f: &[f64], y: &[f64], i_peak: usize) -> Option<f64> {
    let half = 0.5 * y[i_peak];
    let crossing = |i: usize, j: usize| f[i] + (half - y[i]) / (y[j] - y[i]) * (f[j] - f[i]);
    let lower = (1..=i_peak).rev().find(|&i| y[i - 1] < half).map(|i| crossing(i - 1, i))?;
    let upper = (i_peak + 1..y.len()).find(|&i| y[i] < half).map(|i| crossing(i - 1, i))?;
    Some(upper - lower)
}

/// Evenly spaced grid from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    require_positive("grid step", step)?;
    if !(stop >= start) {
        return Err(Error::param("grid stop", stop, "must not be below start"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidData("empty frequency grid".into()));
    }
    for &f in grid {
        require_positive("frequency", f)?;
    }
    Ok(())
}

/// η with Z_L re-optimized at every frequency and a conjugate-matched
/// source, so η′ = η. With a feed attached both loops carry R_EFF(f).
pub fn matched_efficiency_sweep(
    pair: &CoupledPair,
    grid: &[f64],
    feed: Option<&FeedAttachment>,
) -> Result<EfficiencyCurve> {
    pair.require_symmetric()?;
    check_grid(grid)?;
    let mut eta = Vec::with_capacity(grid.len());
    let mut z_l = Vec::with_capacity(grid.len());
    for &f in grid {
        let local = match feed {
            Some(attachment) => pair.with_resistance(attachment.loop_resistance(&pair.loop1, f)?)?,
            None => pair.clone(),
        };
        let z = local.optimal_termination(f)?;
        let term = Termination::conjugate_source(z, local.input_impedance(z, f));
        eta.push(local.efficiency(&term, f).1);
        z_l.push(z);
    }
    Ok(EfficiencyCurve::from_points(grid.to_vec(), eta.clone(), eta, z_l))
}

/// η′ over `grid` with identical L-sections on both sides, designed at
/// `f_match` so the source and load resistance `r_source` see a
/// simultaneous conjugate match there.
pub fn lmatch_bandwidth(
    pair: &CoupledPair,
    f_match: f64,
    r_source: f64,
    grid: &[f64],
) -> Result<(LMatch, EfficiencyCurve)> {
    pair.require_symmetric()?;
    check_grid(grid)?;
    let z_opt = pair.optimal_termination(f_match)?;
    let network = LMatch::design(z_opt.conj(), r_source, f_match)?;
    let mut eta_prime = Vec::with_capacity(grid.len());
    let mut eta = Vec::with_capacity(grid.len());
    let mut z_l = Vec::with_capacity(grid.len());
    for &f in grid {
        let z = network.load_side_impedance(f);
        let term = Termination { z_l: z, z_s: z };
        let (ep, e) = pair.efficiency(&term, f);
        eta_prime.push(ep);
        eta.push(e);
        z_l.push(z);
    }
    Ok((network, EfficiencyCurve::from_points(grid.to_vec(), eta_prime, eta, z_l)))
}
