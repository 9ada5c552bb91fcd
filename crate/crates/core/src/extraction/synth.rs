//! Synthetic input impedances for exercising the extractor.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::DeembedSpec;

/// R + j(ωL - 1/(ωC)) at each frequency.
pub fn series_rlc(r: f64, l: f64, c: f64, frequencies: &[f64]) -> Vec<Complex64> {
    frequencies
        .iter()
        .map(|&f| {
            let w = 2.0 * PI * f;
            Complex64::new(r, w * l - 1.0 / (w * c))
        })
        .collect()
}

/// Series RLC seen through the lossless feed described by `feed`.
pub fn series_rlc_behind_feed(r: f64, l: f64, c: f64, feed: &DeembedSpec, frequencies: &[f64]) -> Vec<Complex64> {
    series_rlc(r, l, c, frequencies)
        .into_iter()
        .zip(frequencies)
        .map(|(z_l, &f)| {
            let z0 = feed.z0_feed;
            let t = Complex64::new(0.0, (0.5 * feed.round_trip_phase(f)).tan());
            z0 * (z_l + z0 * t) / (z0 + z_l * t)
        })
        .collect()
}
