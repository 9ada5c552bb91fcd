//! Reference geometries: a 9 cm copper loop on RT/duroid 5880, built either
//! as a stripline (two 1.59 mm laminates) or a microstrip (one 1.575 mm
//! laminate), plus a 50 Ω microstrip feed used for feedline studies.

use std::f64::consts::PI;

use crate::resonator::LoopGeometry;
use crate::tline::{Conductor, CrossSection, Dielectric};

pub const LOOP_RADIUS: f64 = 0.09;
pub const CROSS_WIDTH: f64 = 0.02;
pub const COPPER_THICKNESS: f64 = 70e-6;

/// Two 1.59 mm laminates around a 70 µm strip.
pub const STRIPLINE_GROUND_SPACING: f64 = 3.18e-3;
pub const STRIPLINE_STACK_THICKNESS: f64 = 3.32e-3;

pub const MICROSTRIP_HEIGHT: f64 = 1.575e-3;

/// Strip widths of the reference sweep (m).
pub const STRIP_WIDTHS: [f64; 5] = [2e-3, 4e-3, 6e-3, 8e-3, 10e-3];

pub fn duroid_5880() -> Dielectric {
    Dielectric {
        relative_permittivity: 2.2,
        loss_tangent: 0.0009,
    }
}

pub fn copper() -> Conductor {
    Conductor::copper(COPPER_THICKNESS).expect("valid copper thickness")
}

/// Stripline loop with the slit opposite the feed.
pub fn stripline_loop(strip_width: f64) -> LoopGeometry {
    LoopGeometry {
        loop_radius: LOOP_RADIUS,
        cross_width: CROSS_WIDTH,
        cross_thickness: STRIPLINE_STACK_THICKNESS,
        slit_angle: PI,
        cross_section: CrossSection::Stripline {
            width: strip_width,
            ground_spacing: STRIPLINE_GROUND_SPACING,
            thickness: COPPER_THICKNESS,
        },
        dielectric: duroid_5880(),
        conductor: copper(),
    }
}

/// Microstrip loop with the slit opposite the feed.
pub fn microstrip_loop(strip_width: f64) -> LoopGeometry {
    LoopGeometry {
        loop_radius: LOOP_RADIUS,
        cross_width: CROSS_WIDTH,
        cross_thickness: MICROSTRIP_HEIGHT,
        slit_angle: PI,
        cross_section: CrossSection::Microstrip {
            width: strip_width,
            height: MICROSTRIP_HEIGHT,
            thickness: COPPER_THICKNESS,
        },
        dielectric: duroid_5880(),
        conductor: copper(),
    }
}

/// 2 mm wide, 35 µm copper microstrip on 813 µm of εr = 3 laminate.
pub fn feed_microstrip() -> (CrossSection, Dielectric, Conductor) {
    (
        CrossSection::Microstrip {
            width: 2e-3,
            height: 813e-6,
            thickness: 35e-6,
        },
        Dielectric {
            relative_permittivity: 3.0,
            loss_tangent: 0.001,
        },
        Conductor::copper(35e-6).expect("valid copper thickness"),
    )
}

/// Frequency at which the feed microstrip is characterised.
pub const FEED_FREQUENCY: f64 = 40e6;
