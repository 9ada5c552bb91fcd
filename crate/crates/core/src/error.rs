use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("strip thickness {thickness} m must be below ground-plane spacing {spacing} m")]
    StripTooThick { thickness: f64, spacing: f64 },

    #[error("loop is too thick for a positive inductance: 8a/b0 = {ratio}")]
    NonPositiveInductance { ratio: f64 },

    #[error("resonant frequency did not converge after {iterations} iterations (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },

    #[error("mutual inductance is singular for coincident loops")]
    CoincidentLoops,

    #[error("coupling coefficient {k} is not below 1")]
    CouplingTooStrong { k: f64 },

    #[error("operation requires a symmetric pair of loops")]
    AsymmetricPair,

    #[error("cannot match impedance with non-positive resistance {resistance} Ω")]
    Unmatchable { resistance: f64 },

    #[error("feedline attenuation {nepers} Np exceeds the supported limit")]
    FeedlineTooLossy { nepers: f64 },

    #[error("R_EFF has no minimum in X_IN (denominator vanishes with nonzero numerator)")]
    NoReactanceMinimum,

    #[error("S11 = 1 is an open-circuit pole")]
    OpenCircuitPole,

    #[error("line {line}: {message}")]
    Touchstone { line: usize, message: String },

    #[error("unsupported network parameter type '{0}' (only S is supported)")]
    UnsupportedParameter(String),

    #[error("resonance not in band")]
    ResonanceNotInBand,

    #[error("only a downward reactance zero crossing was found near {frequency} Hz (parallel-type resonance)")]
    ParallelResonance { frequency: f64 },

    #[error("fit frequencies coincide ({frequency} Hz); the 2x2 system is singular")]
    SingularFit { frequency: f64 },

    #[error("non-series-RLC behaviour: fitted L = {inductance} H, C = {capacitance} F")]
    NonSeriesRlc { inductance: f64, capacitance: f64 },

    #[error("{0}")]
    InvalidData(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

/// Fails with [`Error::InvalidParameter`] unless `value` is finite and > 0.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::param(name, value, "must be positive and finite"))
    }
}
