//! Quasi-TEM transmission-line models.
//!
//! Characteristic impedance comes from closed-form expressions (Wheeler for
//! centered stripline, Hammerstad-Jensen for microstrip, the exact log
//! formula for coax). Conductor loss uses the incremental inductance rule
//! evaluated by central differences, dielectric loss uses `k tanδ / 2`, and
//! the RLGC set follows from those two attenuation constants.

use std::f64::consts::{E, PI};

use num_complex::Complex64;

use crate::constants::{C0, COPPER_CONDUCTIVITY, ETA0, MU0};
use crate::error::{require_positive, Error, Result};

/// Relative wall recession used by the incremental inductance rule, as a
/// fraction of the smallest cross-section dimension.
pub const RECESSION_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conductor {
    /// Conductivity σ (S/m). May be `f64::INFINITY` for a perfect conductor.
    pub conductivity: f64,
    /// Metal thickness t (m).
    pub thickness: f64,
    /// Permeability µ (H/m).
    pub permeability: f64,
}

impl Conductor {
    pub fn new(conductivity: f64, thickness: f64) -> Result<Self> {
        Self::with_permeability(conductivity, thickness, MU0)
    }

    pub fn with_permeability(conductivity: f64, thickness: f64, permeability: f64) -> Result<Self> {
        if !(conductivity > 0.0) {
            return Err(Error::param("conductivity", conductivity, "must be positive"));
        }
        require_positive("conductor thickness", thickness)?;
        require_positive("permeability", permeability)?;
        Ok(Self {
            conductivity,
            thickness,
            permeability,
        })
    }

    pub fn copper(thickness: f64) -> Result<Self> {
        Self::new(COPPER_CONDUCTIVITY, thickness)
    }

    /// Lossless conductor, used for limit checks.
    pub fn perfect(thickness: f64) -> Result<Self> {
        Self::new(f64::INFINITY, thickness)
    }

    /// Skin depth δs = 1/sqrt(π f µ σ).
    pub fn skin_depth(&self, frequency: f64) -> f64 {
        1.0 / (PI * frequency * self.permeability * self.conductivity).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dielectric {
    pub relative_permittivity: f64,
    pub loss_tangent: f64,
}

impl Dielectric {
    pub fn new(relative_permittivity: f64, loss_tangent: f64) -> Result<Self> {
        if !(relative_permittivity >= 1.0) || !relative_permittivity.is_finite() {
            return Err(Error::param(
                "relative permittivity",
                relative_permittivity,
                "must be at least 1",
            ));
        }
        if !(loss_tangent >= 0.0) || !loss_tangent.is_finite() {
            return Err(Error::param("loss tangent", loss_tangent, "must be non-negative"));
        }
        Ok(Self {
            relative_permittivity,
            loss_tangent,
        })
    }

    pub fn air() -> Self {
        Self {
            relative_permittivity: 1.0,
            loss_tangent: 0.0,
        }
    }

    pub fn lossless(&self) -> Self {
        Self {
            loss_tangent: 0.0,
            ..*self
        }
    }
}

/// Transverse geometry of a line. All lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossSection {
    Coax {
        inner_radius: f64,
        outer_radius: f64,
    },
    /// Centered stripline: strip of `width` and `thickness` midway between
    /// two ground planes separated by `ground_spacing`.
    Stripline {
        width: f64,
        ground_spacing: f64,
        thickness: f64,
    },
    /// Strip of `width` and `thickness` on a substrate of `height` over an
    /// infinite ground plane.
    Microstrip {
        width: f64,
        height: f64,
        thickness: f64,
    },
}

impl CrossSection {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CrossSection::Coax {
                inner_radius,
                outer_radius,
            } => {
                require_positive("inner radius", inner_radius)?;
                require_positive("outer radius", outer_radius)?;
                if outer_radius <= inner_radius {
                    return Err(Error::param(
                        "outer radius",
                        outer_radius,
                        "must exceed the inner radius",
                    ));
                }
            }
            CrossSection::Stripline {
                width,
                ground_spacing,
                thickness,
            } => {
                require_positive("strip width", width)?;
                require_positive("ground-plane spacing", ground_spacing)?;
                require_positive("strip thickness", thickness)?;
                if thickness >= ground_spacing {
                    return Err(Error::StripTooThick {
                        thickness,
                        spacing: ground_spacing,
                    });
                }
            }
            CrossSection::Microstrip {
                width,
                height,
                thickness,
            } => {
                require_positive("strip width", width)?;
                require_positive("substrate height", height)?;
                require_positive("strip thickness", thickness)?;
            }
        }
        Ok(())
    }

    fn smallest_dimension(&self) -> f64 {
        match *self {
            CrossSection::Coax {
                inner_radius,
                outer_radius,
            } => inner_radius.min(outer_radius - inner_radius),
            CrossSection::Stripline {
                width,
                ground_spacing,
                thickness,
            } => width.min(ground_spacing - thickness).min(thickness),
            CrossSection::Microstrip {
                width,
                height,
                thickness,
            } => width.min(height).min(thickness),
        }
    }

    /// Every conducting wall moved away from the fields by `delta`
    /// (negative `delta` advances them).
    pub fn recede(&self, delta: f64) -> CrossSection {
        match *self {
            CrossSection::Coax {
                inner_radius,
                outer_radius,
            } => CrossSection::Coax {
                inner_radius: inner_radius - delta,
                outer_radius: outer_radius + delta,
            },
            CrossSection::Stripline {
                width,
                ground_spacing,
                thickness,
            } => CrossSection::Stripline {
                width: width - 2.0 * delta,
                ground_spacing: ground_spacing + 2.0 * delta,
                thickness: thickness - 2.0 * delta,
            },
            CrossSection::Microstrip {
                width,
                height,
                thickness,
            } => CrossSection::Microstrip {
                width: width - 2.0 * delta,
                height: height + 2.0 * delta,
                thickness: thickness - 2.0 * delta,
            },
        }
    }

    /// Nominal (real) characteristic impedance and effective permittivity.
    pub fn impedance(&self, dielectric: &Dielectric) -> Result<LineImpedance> {
        match *self {
            CrossSection::Coax {
                inner_radius,
                outer_radius,
            } => coax_z0(inner_radius, outer_radius, dielectric),
            CrossSection::Stripline {
                width,
                ground_spacing,
                thickness,
            } => stripline_z0(width, ground_spacing, thickness, dielectric),
            CrossSection::Microstrip {
                width,
                height,
                thickness,
            } => microstrip_z0(width, height, thickness, dielectric),
        }
    }

    pub fn strip_width(&self) -> Option<f64> {
        match *self {
            CrossSection::Stripline { width, .. } | CrossSection::Microstrip { width, .. } => {
                Some(width)
            }
            CrossSection::Coax { .. } => None,
        }
    }

    /// Copy with a different strip width (no-op for coax).
    pub fn with_strip_width(&self, new_width: f64) -> CrossSection {
        match *self {
            CrossSection::Stripline {
                ground_spacing,
                thickness,
                ..
            } => CrossSection::Stripline {
                width: new_width,
                ground_spacing,
                thickness,
            },
            CrossSection::Microstrip {
                height, thickness, ..
            } => CrossSection::Microstrip {
                width: new_width,
                height,
                thickness,
            },
            coax => coax,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineImpedance {
    pub z0: f64,
    pub eps_eff: f64,
}

pub fn coax_z0(inner_radius: f64, outer_radius: f64, d: &Dielectric) -> Result<LineImpedance> {
    CrossSection::Coax {
        inner_radius,
        outer_radius,
    }
    .validate()?;
    let er = d.relative_permittivity;
    Ok(LineImpedance {
        z0: ETA0 / (2.0 * PI * er.sqrt()) * (outer_radius / inner_radius).ln(),
        eps_eff: er,
    })
}

/// Wheeler's centered-stripline impedance including the finite strip
/// thickness correction to the effective width.
pub fn stripline_z0(
    width: f64,
    ground_spacing: f64,
    thickness: f64,
    d: &Dielectric,
) -> Result<LineImpedance> {
    CrossSection::Stripline {
        width,
        ground_spacing,
        thickness,
    }
    .validate()?;
    let er = d.relative_permittivity;
    let b = ground_spacing;
    let x = thickness / b;
    let m = 2.0 / (1.0 + (2.0 / 3.0) * x / (1.0 - x));
    let fringe = (x / (2.0 - x)).powi(2) + (0.0796 * x / (width / b + 1.1 * x)).powf(m);
    let delta_w = (b - thickness) * x / (PI * (1.0 - x)) * (1.0 - 0.5 * fringe.ln());
    let w_eff = width + delta_w;

    let a = 4.0 / PI * (b - thickness) / w_eff;
    let z0 = 30.0 / er.sqrt() * (1.0 + a * (2.0 * a + (4.0 * a * a + 6.27).sqrt())).ln();
    Ok(LineImpedance { z0, eps_eff: er })
}

/// Hammerstad-Jensen microstrip impedance and effective permittivity, with
/// the strip-thickness width correction.
pub fn microstrip_z0(
    width: f64,
    height: f64,
    thickness: f64,
    d: &Dielectric,
) -> Result<LineImpedance> {
    CrossSection::Microstrip {
        width,
        height,
        thickness,
    }
    .validate()?;
    let er = d.relative_permittivity;
    let u = width / height;
    let t = thickness / height;

    let coth = 1.0 / (6.517 * u).sqrt().tanh();
    let du_air = t / PI * (1.0 + 4.0 * E / (t * coth * coth)).ln();
    let du_diel = 0.5 * du_air * (1.0 + 1.0 / (er - 1.0).sqrt().cosh());
    let u_air = u + du_air;
    let u_diel = u + du_diel;

    let eps_diel = hj_eps_eff(u_diel, er);
    let ratio = hj_z01(u_air) / hj_z01(u_diel);
    // The thickness correction can dip marginally below 1 for er -> 1.
    let eps_eff = (eps_diel * ratio * ratio).clamp(1.0, er);
    Ok(LineImpedance {
        z0: hj_z01(u_diel) / eps_diel.sqrt(),
        eps_eff,
    })
}

/// Air-filled microstrip impedance for normalized width `u`.
fn hj_z01(u: f64) -> f64 {
    let f = 6.0 + (2.0 * PI - 6.0) * (-(30.666 / u).powf(0.7528)).exp();
    ETA0 / (2.0 * PI) * (f / u + (1.0 + (2.0 / u).powi(2)).sqrt()).ln()
}

fn hj_eps_eff(u: f64, er: f64) -> f64 {
    let a = 1.0
        + ((u.powi(4) + (u / 52.0).powi(2)) / (u.powi(4) + 0.432)).ln() / 49.0
        + (1.0 + (u / 18.1).powi(3)).ln() / 18.7;
    let b = 0.564 * ((er - 0.9) / (er + 3.0)).powf(0.053);
    (er + 1.0) / 2.0 + (er - 1.0) / 2.0 * (1.0 + 10.0 / u).powf(-a * b)
}

/// Surface resistance Rs = sqrt(π f µ / σ) in Ω per square.
pub fn sheet_resistance(frequency: f64, c: &Conductor) -> Result<f64> {
    require_positive("frequency", frequency)?;
    Ok((PI * frequency * c.permeability / c.conductivity).sqrt())
}

/// dZ0/dl by central differences over a wall recession of
/// [`RECESSION_STEP`] times the smallest dimension.
pub fn impedance_recession_slope(cs: &CrossSection, d: &Dielectric) -> Result<f64> {
    cs.validate()?;
    let step = RECESSION_STEP * cs.smallest_dimension();
    recession_slope_with_step(cs, d, step)
}

pub(crate) fn recession_slope_with_step(cs: &CrossSection, d: &Dielectric, step: f64) -> Result<f64> {
    let receded = cs.recede(step).impedance(d)?.z0;
    let advanced = cs.recede(-step).impedance(d)?.z0;
    Ok((receded - advanced) / (2.0 * step))
}

/// Conductor attenuation αc = Rs / (2 Z0 η) · dZ0/dl with η = η0/sqrt(εeff).
pub fn conductor_attenuation(
    cs: &CrossSection,
    d: &Dielectric,
    c: &Conductor,
    frequency: f64,
) -> Result<f64> {
    let rs = sheet_resistance(frequency, c)?;
    let line = cs.impedance(d)?;
    if rs == 0.0 {
        return Ok(0.0);
    }
    let eta = ETA0 / line.eps_eff.sqrt();
    let slope = impedance_recession_slope(cs, d)?;
    Ok((rs / (2.0 * line.z0 * eta) * slope).max(0.0))
}

/// Dielectric attenuation αd = k tanδ / 2 with k = 2πf sqrt(εeff) / c.
pub fn dielectric_attenuation(frequency: f64, eps_eff: f64, loss_tangent: f64) -> f64 {
    let k = 2.0 * PI * frequency * eps_eff.sqrt() / C0;
    k * loss_tangent / 2.0
}

/// γ = sqrt((R' + jωL')(G' + jωC')), principal branch (Re γ ≥ 0).
pub fn propagation_constant(r: f64, l: f64, g: f64, c: f64, omega: f64) -> Complex64 {
    (Complex64::new(r, omega * l) * Complex64::new(g, omega * c)).sqrt()
}

/// Z0 = sqrt((R' + jωL') / (G' + jωC')).
pub fn complex_impedance(r: f64, l: f64, g: f64, c: f64, omega: f64) -> Complex64 {
    (Complex64::new(r, omega * l) / Complex64::new(g, omega * c)).sqrt()
}

/// Per-unit-length model of one cross section at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TLineParams {
    pub z0: f64,
    pub z0_complex: Complex64,
    pub eps_eff: f64,
    /// R' (Ω/m)
    pub resistance: f64,
    /// L' (H/m)
    pub inductance: f64,
    /// G' (S/m)
    pub conductance: f64,
    /// C' (F/m)
    pub capacitance: f64,
    pub alpha_c: f64,
    pub alpha_d: f64,
    pub gamma: Complex64,
    pub frequency: f64,
}

impl TLineParams {
    pub fn omega(&self) -> f64 {
        2.0 * PI * self.frequency
    }

    pub fn beta(&self) -> f64 {
        self.gamma.im
    }

    pub fn phase_velocity(&self) -> f64 {
        C0 / self.eps_eff.sqrt()
    }

    /// Same line with R' = G' = 0.
    pub fn lossless(&self) -> TLineParams {
        let omega = self.omega();
        TLineParams {
            resistance: 0.0,
            conductance: 0.0,
            alpha_c: 0.0,
            alpha_d: 0.0,
            z0_complex: Complex64::new(self.z0, 0.0),
            gamma: propagation_constant(0.0, self.inductance, 0.0, self.capacitance, omega),
            ..*self
        }
    }
}

pub fn rlgc(cs: &CrossSection, d: &Dielectric, c: &Conductor, frequency: f64) -> Result<TLineParams> {
    require_positive("frequency", frequency)?;
    let LineImpedance { z0, eps_eff } = cs.impedance(d)?;
    let alpha_c = conductor_attenuation(cs, d, c, frequency)?;
    let alpha_d = dielectric_attenuation(frequency, eps_eff, d.loss_tangent);

    let resistance = 2.0 * alpha_c * z0;
    let conductance = 2.0 * alpha_d / z0;
    let capacitance = eps_eff.sqrt() / (C0 * z0);
    let inductance = z0 * z0 * capacitance;

    let omega = 2.0 * PI * frequency;
    Ok(TLineParams {
        z0,
        z0_complex: complex_impedance(resistance, inductance, conductance, capacitance, omega),
        eps_eff,
        resistance,
        inductance,
        conductance,
        capacitance,
        alpha_c,
        alpha_d,
        gamma: propagation_constant(resistance, inductance, conductance, capacitance, omega),
        frequency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rt5880() -> Dielectric {
        Dielectric::new(2.2, 0.0009).unwrap()
    }

    fn stripline(w: f64) -> CrossSection {
        CrossSection::Stripline {
            width: w,
            ground_spacing: 3.18e-3,
            thickness: 70e-6,
        }
    }

    fn feed_line() -> (CrossSection, Dielectric, Conductor) {
        (
            CrossSection::Microstrip {
                width: 2e-3,
                height: 813e-6,
                thickness: 35e-6,
            },
            Dielectric::new(3.0, 0.001).unwrap(),
            Conductor::copper(35e-6).unwrap(),
        )
    }

    #[test]
    fn stripline_impedance_near_full_wave_value() {
        let z = stripline_z0(10e-3, 3.18e-3, 70e-6, &rt5880()).unwrap();
        assert!((z.z0 - 17.0).abs() / 17.0 < 0.10, "{}", z.z0);
        assert_eq!(z.eps_eff, 2.2);
    }

    #[test]
    fn stripline_capacitance_matches_model_row_scale() {
        let z = stripline_z0(10e-3, 3.18e-3, 70e-6, &rt5880()).unwrap();
        let c = z.eps_eff.sqrt() / (C0 * z.z0);
        // 82.5 pF over a stub of π·9 cm
        assert!((c - 291.8e-12).abs() / 291.8e-12 < 0.03, "{c}");
    }

    #[test]
    fn stripline_rejects_thick_strip() {
        let err = stripline_z0(10e-3, 1e-3, 1e-3, &rt5880()).unwrap_err();
        assert!(matches!(err, Error::StripTooThick { .. }));
        assert!(stripline_z0(0.0, 3e-3, 1e-5, &rt5880()).is_err());
    }

    #[test]
    fn microstrip_feed_line_impedance() {
        let (cs, d, _) = feed_line();
        let z = cs.impedance(&d).unwrap();
        assert!((z.z0 - 50.38).abs() / 50.38 < 0.05, "{}", z.z0);
        assert!(z.eps_eff > 1.0 && z.eps_eff < 3.0);
    }

    #[test]
    fn microstrip_capacitance_matches_model_row_scale() {
        let z = microstrip_z0(10e-3, 1.575e-3, 70e-6, &rt5880()).unwrap();
        let c = z.eps_eff.sqrt() / (C0 * z.z0);
        assert!((c - 160.2e-12).abs() / 160.2e-12 < 0.10, "{c}");
    }

    #[test]
    fn microstrip_air_has_unit_permittivity() {
        let z = microstrip_z0(3e-3, 1e-3, 35e-6, &Dielectric::air()).unwrap();
        assert_eq!(z.eps_eff, 1.0);
    }

    #[test]
    fn coax_matches_textbook_attenuation() {
        // αc = Rs (1/a + 1/b) / (2 η ln(b/a)) for coax
        let (a, b) = (0.5e-3, 1.75e-3);
        let cs = CrossSection::Coax {
            inner_radius: a,
            outer_radius: b,
        };
        let d = Dielectric::new(2.1, 0.0).unwrap();
        let c = Conductor::copper(0.1e-3).unwrap();
        let f = 1e9;
        let rs = sheet_resistance(f, &c).unwrap();
        let eta = ETA0 / 2.1f64.sqrt();
        let expected = rs * (1.0 / a + 1.0 / b) / (2.0 * eta * (b / a).ln());
        let got = conductor_attenuation(&cs, &d, &c, f).unwrap();
        assert_relative_eq!(got, expected, max_relative = 1e-6);
    }

    #[test]
    fn sheet_resistance_values() {
        let cu = Conductor::copper(70e-6).unwrap();
        let rs = sheet_resistance(40e6, &cu).unwrap();
        assert_relative_eq!(rs, 1.650e-3, max_relative = 2e-3);
        let rs4 = sheet_resistance(160e6, &cu).unwrap();
        assert_relative_eq!(rs4, 2.0 * rs, max_relative = 1e-12);
        assert!(sheet_resistance(0.0, &cu).is_err());
    }

    #[test]
    fn dielectric_attenuation_values() {
        assert_eq!(dielectric_attenuation(40e6, 2.4, 0.0), 0.0);
        assert_relative_eq!(dielectric_attenuation(40e6, 2.4, 0.001), 6.49e-4, max_relative = 2e-3);
        assert_relative_eq!(
            dielectric_attenuation(80e6, 2.4, 0.001),
            2.0 * dielectric_attenuation(40e6, 2.4, 0.001),
            max_relative = 1e-12
        );
    }

    #[test]
    fn perfect_conductor_has_no_conductor_loss() {
        let c = Conductor::perfect(70e-6).unwrap();
        let a = conductor_attenuation(&stripline(5e-3), &rt5880(), &c, 30e6).unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn recession_step_is_converged() {
        for cs in [stripline(4e-3), feed_line().0] {
            let d = rt5880();
            let base = RECESSION_STEP * cs.smallest_dimension();
            let s1 = recession_slope_with_step(&cs, &d, base).unwrap();
            let s2 = recession_slope_with_step(&cs, &d, base / 2.0).unwrap();
            assert!((s1 - s2).abs() / s1.abs() < 1e-3, "{s1} {s2}");
        }
    }

    #[test]
    fn feed_line_propagation() {
        let (cs, d, c) = feed_line();
        let p = rlgc(&cs, &d, &c, 40e6).unwrap();
        assert!((p.gamma.re - 0.0105).abs() / 0.0105 < 0.15, "{}", p.gamma);
        assert!((p.gamma.im - 1.31).abs() / 1.31 < 0.03, "{}", p.gamma);
        assert!((p.z0_complex.re - 50.38).abs() / 50.38 < 0.05);
        assert!((p.z0_complex.im - -0.3585).abs() / 0.3585 < 0.15, "{}", p.z0_complex);
    }

    #[test]
    fn lossless_limit() {
        let c = Conductor::perfect(35e-6).unwrap();
        let d = Dielectric::new(3.0, 0.0).unwrap();
        let p = rlgc(&feed_line().0, &d, &c, 40e6).unwrap();
        assert_eq!(p.resistance, 0.0);
        assert_eq!(p.conductance, 0.0);
        assert_eq!(p.gamma.re, 0.0);
        let beta = 2.0 * PI * 40e6 * p.eps_eff.sqrt() / C0;
        assert_relative_eq!(p.gamma.im, beta, max_relative = 1e-9);
        assert_relative_eq!(p.z0_complex.re, p.z0, max_relative = 1e-12);
    }

    #[test]
    fn characteristic_impedance_identity() {
        let p = rlgc(&stripline(6e-3), &rt5880(), &Conductor::copper(70e-6).unwrap(), 35e6).unwrap();
        assert_relative_eq!((p.inductance / p.capacitance).sqrt(), p.z0, max_relative = 1e-14);
    }

    #[test]
    fn invalid_materials() {
        assert!(Dielectric::new(0.5, 0.0).is_err());
        assert!(Dielectric::new(2.2, -0.1).is_err());
        assert!(Conductor::new(0.0, 1e-5).is_err());
        assert!(Conductor::new(5.8e7, 0.0).is_err());
        assert!(CrossSection::Coax {
            inner_radius: 2e-3,
            outer_radius: 1e-3
        }
        .validate()
        .is_err());
    }
}
