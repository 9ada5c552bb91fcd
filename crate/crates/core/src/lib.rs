//! Design and analysis of shielded-loop resonators for resonant inductive
//! power transfer.
//!
//! The crate is organised bottom-up:
//!
//! * [`tline`] computes characteristic impedance, attenuation and RLGC
//!   parameters for coaxial, stripline and microstrip cross sections.
//! * [`resonator`] turns a loop geometry into a series-RLC model.
//! * [`feedline`] quantifies the effective series resistance a lossy input
//!   feedline adds to a resonator.
//! * [`coupling`] evaluates two magnetically coupled loops: mutual
//!   inductance, input impedance, optimal terminations and efficiency.
//! * [`extraction`] reads Touchstone data and recovers {R, L, C} from a
//!   measured or simulated input reflection.
//!
//! All quantities are SI base units (Hz, m, Ω, H, F, Np) unless a name says
//! otherwise.

pub mod constants;
pub mod coupling;
pub mod error;
pub mod extraction;
pub mod feedline;
pub mod presets;
pub mod resonator;
pub mod tline;

pub use error::{Error, Result};
pub use num_complex::Complex64;
