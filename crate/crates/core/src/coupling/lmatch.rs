//! Lossless two-element L-section matching networks.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Inductor(f64),
    Capacitor(f64),
}

impl Element {
    fn from_reactance(x: f64, omega: f64) -> Self {
        if x >= 0.0 {
            Element::Inductor(x / omega)
        } else {
            Element::Capacitor(-1.0 / (omega * x))
        }
    }

    fn from_susceptance(b: f64, omega: f64) -> Self {
        if b >= 0.0 {
            Element::Capacitor(b / omega)
        } else {
            Element::Inductor(-1.0 / (omega * b))
        }
    }

    pub fn impedance(&self, frequency: f64) -> Complex64 {
        let w = 2.0 * PI * frequency;
        match *self {
            Element::Inductor(l) => Complex64::new(0.0, w * l),
            Element::Capacitor(c) if c == 0.0 => Complex64::new(f64::INFINITY, 0.0),
            Element::Capacitor(c) => Complex64::new(0.0, -1.0 / (w * c)),
        }
    }

    fn admittance(&self, frequency: f64) -> Complex64 {
        let w = 2.0 * PI * frequency;
        match *self {
            Element::Inductor(l) if l == 0.0 => Complex64::new(f64::INFINITY, 0.0),
            Element::Inductor(l) => Complex64::new(0.0, -1.0 / (w * l)),
            Element::Capacitor(c) => Complex64::new(0.0, w * c),
        }
    }
}

/// Which element sits next to the matched load.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Shunt element across the load, series element toward the port.
    ShuntFirst,
    /// Series element at the load, shunt element across the port.
    SeriesFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LMatch {
    pub topology: Topology,
    pub series: Element,
    pub shunt: Element,
    pub port_resistance: f64,
    pub design_frequency: f64,
}

impl LMatch {
    /// Designs a network presenting `port_resistance` at its port when the
    /// other side is terminated in `load` at `frequency`. Of the two
    /// solutions the one with the positive square root is returned.
    pub fn design(load: Complex64, port_resistance: f64, frequency: f64) -> Result<Self> {
        require_positive("port resistance", port_resistance)?;
        require_positive("match frequency", frequency)?;
        let (r, x) = (load.re, load.im);
        if !(r > 0.0) {
            return Err(Error::Unmatchable { resistance: r });
        }
        let z0 = port_resistance;
        let w = 2.0 * PI * frequency;
        if r > z0 {
            let mag2 = r * r + x * x;
            let b = (x + (r / z0).sqrt() * (mag2 - z0 * r).sqrt()) / mag2;
            let xs = 1.0 / b + x * z0 / r - z0 / (b * r);
            Ok(Self {
                topology: Topology::ShuntFirst,
                series: Element::from_reactance(xs, w),
                shunt: Element::from_susceptance(b, w),
                port_resistance,
                design_frequency: frequency,
            })
        } else {
            let xs = (r * (z0 - r)).sqrt() - x;
            let b = ((z0 - r) / r).sqrt() / z0;
            Ok(Self {
                topology: Topology::SeriesFirst,
                series: Element::from_reactance(xs, w),
                shunt: Element::from_susceptance(b, w),
                port_resistance,
                design_frequency: frequency,
            })
        }
    }

    /// Impedance seen at the port with `load` on the other side.
    pub fn port_impedance(&self, load: Complex64, frequency: f64) -> Complex64 {
        let zs = self.series.impedance(frequency);
        let ys = self.shunt.admittance(frequency);
        match self.topology {
            Topology::ShuntFirst => zs + 1.0 / (ys + 1.0 / load),
            Topology::SeriesFirst => 1.0 / (ys + 1.0 / (zs + load)),
        }
    }

    /// Impedance seen from the load side with the port terminated in its
    /// design resistance.
    pub fn load_side_impedance(&self, frequency: f64) -> Complex64 {
        let zs = self.series.impedance(frequency);
        let ys = self.shunt.admittance(frequency);
        let z0 = Complex64::new(self.port_resistance, 0.0);
        match self.topology {
            Topology::ShuntFirst => 1.0 / (ys + 1.0 / (zs + z0)),
            Topology::SeriesFirst => zs + 1.0 / (ys + 1.0 / z0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn both_topologies_match() {
        for load in [
            Complex64::new(200.0, -80.0),
            Complex64::new(10.0, 15.0),
            Complex64::new(3.0, -40.0),
            Complex64::new(75.0, 0.0),
        ] {
            let m = LMatch::design(load, 50.0, 42.8e6).unwrap();
            let z = m.port_impedance(load, 42.8e6);
            assert_relative_eq!(z.re, 50.0, max_relative = 1e-9);
            assert!(z.im.abs() < 1e-7, "{load} -> {z}");
            // a lossless match seen backwards is the conjugate of the load
            let back = m.load_side_impedance(42.8e6);
            assert_relative_eq!(back.re, load.re, max_relative = 1e-9);
            assert_relative_eq!(back.im, -load.im, epsilon = 1e-7);
        }
    }

    #[test]
    fn rejects_passive_violations() {
        assert!(matches!(
            LMatch::design(Complex64::new(0.0, 10.0), 50.0, 1e6),
            Err(Error::Unmatchable { .. })
        ));
    }
}
