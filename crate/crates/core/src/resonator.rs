//! First-order series-RLC model of a shielded-loop resonator.
//!
//! The loop current sets the inductance, the open-circuited stub past the
//! ground slit sets the capacitance, and four loss terms (radiation, loop
//! conductor loss, stub ESR, feedline loss) add up to the series
//! resistance.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::{C0, MU0};
use crate::error::{require_positive, Error, Result};
use crate::tline::{rlgc, Conductor, CrossSection, Dielectric, TLineParams};

/// The lumped-stub approximation is flagged once βl exceeds this.
pub const STUB_VALIDITY_LIMIT: f64 = PI / 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopGeometry {
    /// Mean loop radius a (m).
    pub loop_radius: f64,
    /// Planar cross-section width b (m). Ignored for coax, where the outer
    /// conductor radius is used directly.
    pub cross_width: f64,
    /// Total thickness of the planar stack (m). Ignored for coax.
    pub cross_thickness: f64,
    /// Angular position of the ground slit measured from the input (rad).
    pub slit_angle: f64,
    pub cross_section: CrossSection,
    pub dielectric: Dielectric,
    pub conductor: Conductor,
}

impl LoopGeometry {
    pub fn validate(&self) -> Result<()> {
        require_positive("loop radius", self.loop_radius)?;
        self.cross_section.validate()?;
        if !matches!(self.cross_section, CrossSection::Coax { .. }) {
            require_positive("cross-section width", self.cross_width)?;
            require_positive("cross-section thickness", self.cross_thickness)?;
        }
        if !(self.slit_angle > 0.0 && self.slit_angle < 2.0 * PI) {
            return Err(Error::param("slit angle", self.slit_angle, "must lie in (0, 2π)"));
        }
        Ok(())
    }

    /// Radius b0 of the equivalent round conductor.
    pub fn rod_radius(&self) -> Result<f64> {
        match self.cross_section {
            CrossSection::Coax { outer_radius, .. } => Ok(outer_radius),
            _ => equivalent_rod_radius(self.cross_width),
        }
    }

    /// Outer-conductor perimeter A_S' of a cross-sectional slice.
    pub fn perimeter(&self) -> f64 {
        match self.cross_section {
            CrossSection::Coax { outer_radius, .. } => 2.0 * PI * outer_radius,
            _ => 2.0 * (self.cross_width + self.cross_thickness),
        }
    }

    pub fn stub_length(&self) -> f64 {
        (2.0 * PI - self.slit_angle) * self.loop_radius
    }

    pub fn feed_length(&self) -> f64 {
        self.slit_angle * self.loop_radius
    }

    pub fn with_strip_width(&self, width: f64) -> LoopGeometry {
        LoopGeometry {
            cross_section: self.cross_section.with_strip_width(width),
            ..*self
        }
    }

    pub fn with_slit_angle(&self, slit_angle: f64) -> LoopGeometry {
        LoopGeometry { slit_angle, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// b > a/2: the thin-ring assumption is stretched.
    ThickRing { cross_width: f64, loop_radius: f64 },
    /// Loop circumference is not small against the free-space wavelength.
    ElectricallyLarge { circumference: f64, wavelength: f64 },
    /// βl of the stub exceeds π/6, so the lumped capacitor is approximate.
    LongStub { electrical_length: f64 },
    /// Zero-length stub.
    DegenerateStub,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossBreakdown {
    pub radiation: f64,
    pub conductor: f64,
    pub esr: f64,
    pub feed: f64,
}

impl LossBreakdown {
    pub fn total(&self) -> f64 {
        self.radiation + self.conductor + self.esr + self.feed
    }
}

/// How the exterior loop-current loss is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoopLossForm {
    /// (2πa / A_S') · Rs: loop length over slice perimeter, times Rs.
    #[default]
    Circumference,
    /// (a / A_S') · sqrt(f µ π / (π σ)), the expression without the loop
    /// circumference factor.
    Radius,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CapacitanceModel {
    /// C = C' l, valid for βl ≪ 1.
    #[default]
    Lumped,
    /// Capacitance equivalent to the open-stub reactance -Z0 cot(βl).
    OpenStub,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Evaluation {
    /// Losses evaluated at the self-consistent resonant frequency.
    #[default]
    Resonance,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOptions {
    pub evaluation: Evaluation,
    pub loop_loss: LoopLossForm,
    pub capacitance: CapacitanceModel,
    /// Frequency at which the first RLGC evaluation happens.
    pub start_frequency: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            evaluation: Evaluation::Resonance,
            loop_loss: LoopLossForm::Circumference,
            capacitance: CapacitanceModel::Lumped,
            start_frequency: 30e6,
            tolerance: 1e-6,
            max_iterations: 50,
        }
    }
}

/// Line state and diagnostics behind a synthesized [`LoopRlc`].
#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis {
    pub breakdown: LossBreakdown,
    pub stub_length: f64,
    pub feed_length: f64,
    /// RLGC of the loop's line at the loss-evaluation frequency.
    pub line: TLineParams,
    pub iterations: usize,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopRlc {
    pub r: f64,
    pub l: f64,
    pub c: f64,
    pub f0: f64,
    /// Present when the values came from [`build_resonator`].
    pub synthesis: Option<Synthesis>,
}

impl LoopRlc {
    pub fn from_rlc(r: f64, l: f64, c: f64) -> Result<Self> {
        require_positive("resistance", r)?;
        require_positive("inductance", l)?;
        require_positive("capacitance", c)?;
        Ok(Self {
            r,
            l,
            c,
            f0: resonant_frequency(l, c)?,
            synthesis: None,
        })
    }

    pub fn omega0(&self) -> f64 {
        2.0 * PI * self.f0
    }

    /// Q(f) = 2πf L / R.
    pub fn q_at(&self, frequency: f64) -> f64 {
        2.0 * PI * frequency * self.l / self.r
    }

    pub fn q(&self) -> f64 {
        self.q_at(self.f0)
    }

    /// ωL - 1/(ωC)
    pub fn reactance(&self, frequency: f64) -> f64 {
        let w = 2.0 * PI * frequency;
        w * self.l - 1.0 / (w * self.c)
    }

    pub fn impedance(&self, frequency: f64) -> Complex64 {
        Complex64::new(self.r, self.reactance(frequency))
    }

    pub fn breakdown(&self) -> Option<&LossBreakdown> {
        self.synthesis.as_ref().map(|s| &s.breakdown)
    }

    /// Series resistance without the feedline term.
    pub fn resistance_without_feed(&self) -> f64 {
        self.r - self.breakdown().map_or(0.0, |b| b.feed)
    }
}

/// b0 = b / 4 for a flat strip of width b.
pub fn equivalent_rod_radius(width: f64) -> Result<f64> {
    require_positive("cross-section width", width)?;
    Ok(width / 4.0)
}

/// L = µ0 a [ln(8a/b0) - 1.75]
pub fn loop_inductance(loop_radius: f64, rod_radius: f64) -> Result<f64> {
    require_positive("loop radius", loop_radius)?;
    require_positive("rod radius", rod_radius)?;
    let ratio = 8.0 * loop_radius / rod_radius;
    let bracket = ratio.ln() - 1.75;
    if bracket <= 0.0 {
        return Err(Error::NonPositiveInductance { ratio });
    }
    Ok(MU0 * loop_radius * bracket)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StubCapacitance {
    pub capacitance: f64,
    pub warning: Option<Warning>,
}

/// C = C' l, flagged when βl > π/6 or l = 0.
pub fn stub_capacitance(c_per_m: f64, stub_length: f64, beta: f64) -> Result<StubCapacitance> {
    if !(stub_length >= 0.0) {
        return Err(Error::param("stub length", stub_length, "must be non-negative"));
    }
    let warning = if stub_length == 0.0 {
        Some(Warning::DegenerateStub)
    } else if beta * stub_length > STUB_VALIDITY_LIMIT {
        Some(Warning::LongStub {
            electrical_length: beta * stub_length,
        })
    } else {
        None
    };
    Ok(StubCapacitance {
        capacitance: c_per_m * stub_length,
        warning,
    })
}

/// Capacitance whose reactance equals that of a lossless open stub.
pub fn open_stub_capacitance(line: &TLineParams, stub_length: f64) -> Result<f64> {
    let theta = line.beta() * stub_length;
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::param(
            "stub electrical length",
            theta,
            "open stub is not capacitive outside (0, π/2)",
        ));
    }
    Ok(theta.tan() / (line.omega() * line.z0))
}

/// f0 = 1 / (2π sqrt(LC))
pub fn resonant_frequency(l: f64, c: f64) -> Result<f64> {
    require_positive("inductance", l)?;
    require_positive("capacitance", c)?;
    Ok(1.0 / (2.0 * PI * (l * c).sqrt()))
}

/// R_rad = 31170 (π a² / λ²)²
pub fn radiation_resistance(loop_radius: f64, frequency: f64) -> f64 {
    let wavelength = C0 / frequency;
    31170.0 * (PI * loop_radius * loop_radius / (wavelength * wavelength)).powi(2)
}

pub fn electrical_size_warning(loop_radius: f64, frequency: f64) -> Option<Warning> {
    let circumference = 2.0 * PI * loop_radius;
    let wavelength = C0 / frequency;
    (circumference >= wavelength).then_some(Warning::ElectricallyLarge {
        circumference,
        wavelength,
    })
}

/// Exterior conductor loss of the loop current, assumed uniform over the
/// slice perimeter A_S'.
pub fn conductor_resistance(
    loop_radius: f64,
    perimeter: f64,
    frequency: f64,
    c: &Conductor,
    form: LoopLossForm,
) -> Result<f64> {
    require_positive("perimeter", perimeter)?;
    require_positive("frequency", frequency)?;
    let f_mu = frequency * c.permeability;
    Ok(match form {
        LoopLossForm::Circumference => {
            2.0 * PI * loop_radius / perimeter * (PI * f_mu / c.conductivity).sqrt()
        }
        LoopLossForm::Radius => loop_radius / perimeter * (f_mu * PI / (PI * c.conductivity)).sqrt(),
    })
}

/// ESR of the open stub: Re[Z0 coth(γl)], or Re[1 / (l (G' + jωC'))] when
/// the line has no attenuation.
pub fn stub_esr(line: &TLineParams, stub_length: f64) -> Result<f64> {
    require_positive("stub length", stub_length)?;
    if line.gamma.re > 0.0 {
        let coth = 1.0 / (line.gamma * stub_length).tanh();
        Ok((line.z0_complex * coth).re.max(0.0))
    } else {
        Ok(stub_esr_small_loop(line, stub_length))
    }
}

/// Electrically-small form Re[1 / (l (G' + jωC'))].
pub fn stub_esr_small_loop(line: &TLineParams, stub_length: f64) -> f64 {
    let y = Complex64::new(line.conductance, line.omega() * line.capacitance) * stub_length;
    y.inv().re
}

/// R' times the feedline length.
pub fn feed_resistance(r_per_m: f64, feed_length: f64) -> f64 {
    r_per_m * feed_length
}

fn stub_capacitance_for(
    line: &TLineParams,
    stub_length: f64,
    model: CapacitanceModel,
) -> Result<StubCapacitance> {
    let lumped = stub_capacitance(line.capacitance, stub_length, line.beta())?;
    match model {
        CapacitanceModel::Lumped => Ok(lumped),
        CapacitanceModel::OpenStub => Ok(StubCapacitance {
            capacitance: open_stub_capacitance(line, stub_length)?,
            ..lumped
        }),
    }
}

/// Synthesizes {R, L, C, f0} for a loop. The resonant frequency is iterated
/// to a fixed point because the line parameters depend on frequency.
pub fn build_resonator(g: &LoopGeometry, opts: &ModelOptions) -> Result<LoopRlc> {
    g.validate()?;
    let mut warnings = Vec::new();
    if !matches!(g.cross_section, CrossSection::Coax { .. }) && g.cross_width > g.loop_radius / 2.0 {
        warnings.push(Warning::ThickRing {
            cross_width: g.cross_width,
            loop_radius: g.loop_radius,
        });
    }

    let l = loop_inductance(g.loop_radius, g.rod_radius()?)?;
    let stub = g.stub_length();
    let feed = g.feed_length();

    let mut f = opts.start_frequency;
    let mut iterations = 0;
    let (c, stub_warning) = loop {
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                last_step: f64::NAN,
            });
        }
        iterations += 1;
        let line = rlgc(&g.cross_section, &g.dielectric, &g.conductor, f)?;
        let cap = stub_capacitance_for(&line, stub, opts.capacitance)?;
        if cap.capacitance <= 0.0 {
            return Err(Error::param("stub length", stub, "gives no capacitance"));
        }
        let next = resonant_frequency(l, cap.capacitance)?;
        let step = ((next - f) / next).abs();
        f = next;
        if step < opts.tolerance {
            break (cap.capacitance, cap.warning);
        }
        if iterations == opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                last_step: step,
            });
        }
    };
    warnings.extend(stub_warning);

    let f0 = resonant_frequency(l, c)?;
    let f_eval = match opts.evaluation {
        Evaluation::Resonance => f0,
        Evaluation::Fixed(f) => require_positive("evaluation frequency", f)?,
    };
    warnings.extend(electrical_size_warning(g.loop_radius, f_eval));

    let line = rlgc(&g.cross_section, &g.dielectric, &g.conductor, f_eval)?;
    let breakdown = LossBreakdown {
        radiation: radiation_resistance(g.loop_radius, f_eval),
        conductor: conductor_resistance(
            g.loop_radius,
            g.perimeter(),
            f_eval,
            &g.conductor,
            opts.loop_loss,
        )?,
        esr: stub_esr(&line, stub)?,
        feed: feed_resistance(line.resistance, feed),
    };

    Ok(LoopRlc {
        r: breakdown.total(),
        l,
        c,
        f0,
        synthesis: Some(Synthesis {
            breakdown,
            stub_length: stub,
            feed_length: feed,
            line,
            iterations,
            warnings,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use approx::assert_relative_eq;

    #[test]
    fn quarter_width_rule() {
        assert_eq!(equivalent_rod_radius(20e-3).unwrap(), 5e-3);
        assert!(equivalent_rod_radius(0.0).is_err());
    }

    #[test]
    fn coax_uses_outer_radius() {
        let mut g = presets::stripline_loop(10e-3);
        g.cross_section = CrossSection::Coax {
            inner_radius: 1e-3,
            outer_radius: 5e-3,
        };
        assert_eq!(g.rod_radius().unwrap(), 5e-3);
        assert_relative_eq!(g.perimeter(), 31.4159e-3, max_relative = 1e-5);
    }

    #[test]
    fn planar_perimeter() {
        let g = presets::stripline_loop(10e-3);
        assert_relative_eq!(g.perimeter(), 46.64e-3, max_relative = 1e-12);
    }

    #[test]
    fn inductance_of_reference_loop() {
        let l = loop_inductance(0.09, 5e-3).unwrap();
        assert!((l - 0.364e-6).abs() < 0.0005e-6, "{l}");
        let s = 3.7;
        assert_relative_eq!(loop_inductance(0.09 * s, 5e-3 * s).unwrap(), s * l, max_relative = 1e-12);
        assert!(matches!(
            loop_inductance(0.01, 0.02),
            Err(Error::NonPositiveInductance { .. })
        ));
    }

    #[test]
    fn stub_capacitance_values() {
        let c = stub_capacitance(291.8e-12, PI * 0.09, 0.9).unwrap();
        assert!((c.capacitance - 82.5e-12).abs() < 0.05e-12);
        assert!(c.warning.is_none());
        let zero = stub_capacitance(291.8e-12, 0.0, 0.9).unwrap();
        assert_eq!(zero.capacitance, 0.0);
        assert_eq!(zero.warning, Some(Warning::DegenerateStub));
        let long = stub_capacitance(291.8e-12, 1.0, 0.9).unwrap();
        assert!(matches!(long.warning, Some(Warning::LongStub { .. })));
    }

    #[test]
    fn shifted_slit_capacitance_ratio() {
        let c_pi = stub_capacitance(1e-10, (2.0 * PI - PI) * 0.09, 0.0).unwrap().capacitance;
        let theta = 10f64.to_radians();
        let c_10 = stub_capacitance(1e-10, (2.0 * PI - theta) * 0.09, 0.0).unwrap().capacitance;
        assert_relative_eq!(c_10 / c_pi, 350.0 / 180.0, max_relative = 1e-12);
    }

    #[test]
    fn resonant_frequency_values() {
        let f = resonant_frequency(0.364e-6, 82.5e-12).unwrap();
        assert!((f - 29.0e6).abs() < 0.05e6, "{f}");
        let f = resonant_frequency(0.364e-6, 45.3e-12).unwrap();
        assert!((f - 39.2e6).abs() < 0.05e6, "{f}");
        assert_relative_eq!(resonant_frequency(1.0, 1.0).unwrap(), 1.0 / (2.0 * PI));
    }

    #[test]
    fn radiation_resistance_values() {
        assert_relative_eq!(radiation_resistance(0.09, 32.2e6), 2.686e-3, max_relative = 1e-3);
        assert_eq!(radiation_resistance(0.09, 0.0), 0.0);
        assert_relative_eq!(
            radiation_resistance(0.09, 64.4e6),
            16.0 * radiation_resistance(0.09, 32.2e6),
            max_relative = 1e-12
        );
        assert!(electrical_size_warning(0.09, 30e6).is_none());
        assert!(electrical_size_warning(0.09, 1e9).is_some());
    }

    #[test]
    fn conductor_resistance_forms() {
        let cu = Conductor::copper(70e-6).unwrap();
        let perfect = Conductor::perfect(70e-6).unwrap();
        let textbook = conductor_resistance(0.09, 46.64e-3, 30e6, &cu, LoopLossForm::Circumference).unwrap();
        let radius = conductor_resistance(0.09, 46.64e-3, 30e6, &cu, LoopLossForm::Radius).unwrap();
        // the two forms differ by 2π·sqrt(π)
        assert_relative_eq!(textbook / radius, 2.0 * PI * PI.sqrt(), max_relative = 1e-12);
        assert_eq!(
            conductor_resistance(0.09, 46.64e-3, 30e6, &perfect, LoopLossForm::Circumference).unwrap(),
            0.0
        );
    }

    #[test]
    fn stub_esr_lossless_is_zero() {
        let g = presets::stripline_loop(10e-3);
        let line = rlgc(
            &g.cross_section,
            &g.dielectric.lossless(),
            &Conductor::perfect(70e-6).unwrap(),
            29e6,
        )
        .unwrap();
        assert_eq!(stub_esr(&line, PI * 0.09).unwrap(), 0.0);
    }

    #[test]
    fn stub_esr_forms_agree_for_short_dielectric_loss_dominated_stub() {
        let g = presets::stripline_loop(10e-3);
        let line = rlgc(&g.cross_section, &g.dielectric, &Conductor::perfect(70e-6).unwrap(), 29e6).unwrap();
        let stub = 0.1 / line.beta();
        let exact = stub_esr(&line, stub).unwrap();
        let small = stub_esr_small_loop(&line, stub);
        assert!((exact - small).abs() / small < 0.01, "{exact} {small}");
    }

    #[test]
    fn feed_resistance_is_linear() {
        assert_eq!(feed_resistance(0.0, 1.0), 0.0);
        assert_relative_eq!(feed_resistance(0.3, PI * 0.09), 0.3 * PI * 0.09);
        let g = presets::stripline_loop(10e-3);
        assert_relative_eq!(g.feed_length(), PI * 0.09);
        let shifted = g.with_slit_angle(10f64.to_radians());
        assert_relative_eq!(shifted.feed_length(), 10.0 / 360.0 * 2.0 * PI * 0.09, max_relative = 1e-12);
        assert_relative_eq!(
            shifted.feed_length() + shifted.stub_length(),
            2.0 * PI * 0.09,
            max_relative = 1e-12
        );
    }

    #[test]
    fn build_invariants() {
        let rlc = build_resonator(&presets::stripline_loop(6e-3), &ModelOptions::default()).unwrap();
        let s = rlc.synthesis.as_ref().unwrap();
        assert_eq!(rlc.r, s.breakdown.total());
        assert_relative_eq!(rlc.f0, 1.0 / (2.0 * PI * (rlc.l * rlc.c).sqrt()), max_relative = 1e-15);
        assert_relative_eq!(rlc.q(), 2.0 * PI * rlc.f0 * rlc.l / rlc.r, max_relative = 1e-15);
        assert!(s.breakdown.radiation > 0.0 && s.breakdown.conductor > 0.0);
        assert!(s.breakdown.esr > 0.0 && s.breakdown.feed > 0.0);
    }

    #[test]
    fn fixed_evaluation_frequency() {
        let g = presets::stripline_loop(10e-3);
        let opts = ModelOptions {
            evaluation: Evaluation::Fixed(30e6),
            ..Default::default()
        };
        let rlc = build_resonator(&g, &opts).unwrap();
        assert_eq!(rlc.synthesis.unwrap().line.frequency, 30e6);
    }

    #[test]
    fn open_stub_model_raises_capacitance() {
        let g = presets::stripline_loop(10e-3);
        let lumped = build_resonator(&g, &ModelOptions::default()).unwrap();
        let exact = build_resonator(
            &g,
            &ModelOptions {
                capacitance: CapacitanceModel::OpenStub,
                ..Default::default()
            },
        )
        .unwrap();
        // tan(x) > x
        assert!(exact.c > lumped.c);
        assert!((exact.c / lumped.c - 1.0) < 0.05);
    }

    #[test]
    fn iteration_limit_is_enforced() {
        let opts = ModelOptions {
            tolerance: 0.0,
            max_iterations: 3,
            ..Default::default()
        };
        let err = build_resonator(&presets::stripline_loop(10e-3), &opts).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 3, .. }));
    }

    #[test]
    fn invalid_geometry() {
        let g = presets::stripline_loop(10e-3).with_slit_angle(0.0);
        assert!(build_resonator(&g, &ModelOptions::default()).is_err());
        let g = presets::stripline_loop(10e-3).with_slit_angle(2.0 * PI);
        assert!(build_resonator(&g, &ModelOptions::default()).is_err());
    }

    #[test]
    fn thick_ring_warning() {
        let mut g = presets::stripline_loop(10e-3);
        g.cross_width = 0.05;
        let rlc = build_resonator(&g, &ModelOptions::default()).unwrap();
        assert!(rlc
            .synthesis
            .unwrap()
            .warnings
            .iter()
            .any(|w| matches!(w, Warning::ThickRing { .. })));
    }

    #[test]
    fn from_rlc_rejects_nonpositive() {
        assert!(LoopRlc::from_rlc(0.0, 1e-6, 1e-12).is_err());
        let rlc = LoopRlc::from_rlc(0.2, 0.358e-6, 38.7e-12).unwrap();
        assert!(rlc.synthesis.is_none());
        assert_eq!(rlc.resistance_without_feed(), 0.2);
        assert_relative_eq!(rlc.reactance(rlc.f0), 0.0, epsilon = 1e-9);
    }
}
