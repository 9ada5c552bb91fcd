pub mod couple;
pub mod design;
pub mod extract;
pub mod feedline;
pub mod sweep;
pub mod validate;

use loopkit::resonator::{LoopRlc, Warning};

use crate::config::ProjectConfig;
use crate::output::{num, si, Format, Report, Sink};

pub struct Context {
    pub config: ProjectConfig,
    pub sink: Sink,
}

impl Context {
    /// Warnings go into the report, or to stderr when stdout carries CSV.
    pub fn warn(&self, report: &mut Report, message: &str) {
        match self.sink.format {
            Format::Report => report.line(format!("warning: {message}")),
            Format::Csv => eprintln!("warning: {message}"),
        }
    }
}

pub const DESIGN_COLUMNS: [&str; 9] = [
    "f0_hz", "l_h", "c_f", "r_ohm", "q", "r_rad", "r_c", "r_esr", "r_feed",
];

pub fn design_row(rlc: &LoopRlc) -> Vec<String> {
    let b = rlc.breakdown().copied().unwrap_or_default();
    [rlc.f0, rlc.l, rlc.c, rlc.r, rlc.q(), b.radiation, b.conductor, b.esr, b.feed]
        .iter()
        .map(|&v| num(v))
        .collect()
}

pub fn describe_warning(w: &Warning) -> String {
    match *w {
        Warning::ThickRing {
            cross_width,
            loop_radius,
        } => format!(
            "cross-section width {} exceeds half the loop radius {}; the thin-ring inductance is approximate",
            si(cross_width, "m"),
            si(loop_radius, "m")
        ),
        Warning::ElectricallyLarge {
            circumference,
            wavelength,
        } => format!(
            "loop circumference {} is not small against the wavelength {}",
            si(circumference, "m"),
            si(wavelength, "m")
        ),
        Warning::LongStub { electrical_length } => format!(
            "stub electrical length {:.4} rad exceeds pi/6; the lumped capacitance is approximate",
            electrical_length
        ),
        Warning::DegenerateStub => "stub has zero length".to_string(),
    }
}
