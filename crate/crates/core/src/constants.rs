//! Physical constants.

use std::f64::consts::PI;

/// Speed of light in vacuum (m/s).
pub const C0: f64 = 299_792_458.0;

/// Vacuum permeability (H/m), classical definition.
pub const MU0: f64 = 4.0e-7 * PI;

/// Wave impedance of free space (Ω).
pub const ETA0: f64 = MU0 * C0;

/// Conductivity of annealed copper (S/m).
pub const COPPER_CONDUCTIVITY: f64 = 5.8e7;
