//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if a criterion fails that is not listed in KNOWN_DEVIATIONS.

use std::f64::consts::PI;
use std::time::Instant;

use loopkit::coupling::{
    lmatch_bandwidth, linear_grid, mutual_inductance_coaxial, CoupledPair, Termination,
};
use loopkit::extraction::synth::series_rlc_behind_feed;
use loopkit::extraction::{
    extract_rlc, parse_touchstone, s_from_z, write_touchstone, DataFormat, DeembedSpec, ExtractOptions,
    ExtractedRlc, FrequencyUnit, TouchstoneData, WriteOptions,
};
use loopkit::feedline::{reff_exact, reff_simplified, x_in_min, FeedlineSpec, LoadPoint};
use loopkit::presets;
use loopkit::resonator::{build_resonator, LoopGeometry, LoopRlc, ModelOptions};
use loopkit::tline::rlgc;
use loopkit::{Complex64, Result};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

/// Criteria expected to fail; the reasons are recorded in the project notes.
const KNOWN_DEVIATIONS: &[u32] = &[2];

const MU0: f64 = 4e-7 * PI;

// full-wave reference values, W = 2..10 mm in 1 mm steps
const STRIPLINE_F0_MHZ: [f64; 9] = [54.7, 49.1, 44.9, 41.7, 39.2, 37.0, 35.2, 33.6, 32.2];
const STRIPLINE_C_PF: [f64; 9] = [21.2, 27.7, 33.5, 39.7, 46.4, 52.9, 59.9, 65.5, 72.6];
const SHIFTED_STRIPLINE_C_PF: [f64; 9] = [42.5, 55.4, 67.5, 81.8, 94.5, 108.5, 121.1, 136.2, 149.0];
const MICROSTRIP_F0_MHZ: [f64; 9] = [68.6, 61.6, 57.1, 53.4, 50.9, 48.4, 46.0, 44.2, 42.8];

struct Outcome {
    passed: bool,
    detail: String,
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    ((value - target) / target).abs() <= tol
}

fn widths() -> impl Iterator<Item = f64> {
    (2..=10).map(|w| w as f64 * 1e-3)
}

fn model(g: &LoopGeometry) -> Result<LoopRlc> {
    build_resonator(g, &ModelOptions::default())
}

/// Checks a model row: (value, target, relative tolerance) per quantity.
fn model_row(rlc: &LoopRlc, targets: [(f64, f64); 5]) -> (bool, String) {
    let values = [rlc.f0 / 1e6, rlc.l * 1e6, rlc.c * 1e12, rlc.r, rlc.q()];
    let names = ["f0 MHz", "L uH", "C pF", "R ohm", "Q"];
    let mut ok = true;
    let mut parts = Vec::new();
    for ((v, (t, tol)), name) in values.iter().zip(targets).zip(names) {
        let good = within(*v, t, tol);
        ok &= good;
        parts.push(format!("{name} {v:.4} vs {t}{}", if good { "" } else { " (out)" }));
    }
    (ok, parts.join(", "))
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let rlc = model(&presets::stripline_loop(10e-3))?;
    let elapsed = start.elapsed().as_secs_f64();
    let (ok, detail) = model_row(
        &rlc,
        [(29.0, 0.03), (0.364, 0.03), (82.5, 0.08), (0.14, 0.30), (490.0, 0.25)],
    );
    Ok(Outcome {
        passed: ok && elapsed < 1.0,
        detail: format!("{detail}, {:.1} ms", elapsed * 1e3),
    })
}

fn criterion_2() -> Result<Outcome> {
    let rlc = model(&presets::microstrip_loop(10e-3))?;
    let (ok, detail) = model_row(
        &rlc,
        [(39.2, 0.03), (0.364, 0.03), (45.3, 0.08), (0.26, 0.30), (346.0, 0.25)],
    );
    Ok(Outcome { passed: ok, detail })
}

fn criterion_3() -> Result<Outcome> {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (build, reference) in [
        (presets::stripline_loop as fn(f64) -> LoopGeometry, STRIPLINE_F0_MHZ),
        (presets::microstrip_loop, MICROSTRIP_F0_MHZ),
    ] {
        let rows = widths().map(|w| model(&build(w))).collect::<Result<Vec<_>>>()?;
        ok &= rows.windows(2).all(|p| p[1].f0 < p[0].f0);
        ok &= rows.windows(2).all(|p| p[1].q() > p[0].q());
        for (rlc, f_ref) in rows.iter().zip(reference) {
            worst = worst.max((rlc.f0 / 1e6 / f_ref - 1.0).abs());
        }
    }
    ok &= worst <= 0.15;
    Ok(Outcome {
        passed: ok,
        detail: format!("monotone f0/Q, worst f0 deviation {:.1}%", worst * 100.0),
    })
}

fn criterion_4() -> Result<Outcome> {
    let mut ok = true;
    let mut details = Vec::new();
    let g = presets::stripline_loop(10e-3);
    let c_pi = model(&g)?.c;
    let c_10 = model(&g.with_slit_angle(10f64.to_radians()))?.c;
    let ratio = c_10 / c_pi;
    ok &= (ratio - 350.0 / 180.0).abs() <= 1e-12 * ratio;
    details.push(format!("model ratio {ratio:.12}"));
    let mut worst: f64 = 0.0;
    for (shifted, centred) in SHIFTED_STRIPLINE_C_PF.iter().zip(STRIPLINE_C_PF) {
        worst = worst.max((shifted / centred / ratio - 1.0).abs());
    }
    ok &= worst <= 0.10;
    details.push(format!("worst fixture ratio deviation {:.1}%", worst * 100.0));
    Ok(Outcome {
        passed: ok,
        detail: details.join(", "),
    })
}

fn criterion_5() -> Result<Outcome> {
    let (cs, d, c) = presets::feed_microstrip();
    let line = rlgc(&cs, &d, &c, 40e6)?;
    let checks = [
        within(line.gamma.re, 0.0105, 0.15),
        within(line.gamma.im, 1.31, 0.03),
        within(line.z0_complex.re, 50.38, 0.05),
    ];
    Ok(Outcome {
        passed: checks.iter().all(|&b| b),
        detail: format!(
            "gamma = {:.5} + j{:.4} /m, Z0 = {:.3} {:+.4}j ohm",
            line.gamma.re, line.gamma.im, line.z0_complex.re, line.z0_complex.im
        ),
    })
}

fn criterion_6() -> Result<Outcome> {
    let gamma = Complex64::new(0.0105, 1.31);
    let z0 = Complex64::new(50.38, -0.3585);
    let grid: Vec<f64> = (0..=40_000).map(|i| -200.0 + i as f64 * 0.01).collect();
    let mut ok = true;
    let mut worst_rel: f64 = 0.0;
    let mut worst_argmin: f64 = 0.0;
    for l in [0.1, 0.25, 0.5] {
        let feed = FeedlineSpec::new(gamma, z0, l)?;
        let mut best = (f64::INFINITY, 0.0);
        for &x in &grid {
            let load = LoadPoint::reactive(x);
            let exact = reff_exact(&feed, &load)?;
            let simple = reff_simplified(&feed, &load)?;
            worst_rel = worst_rel.max((exact - simple).abs() / exact);
            if simple < best.0 {
                best = (simple, x);
            }
        }
        worst_argmin = worst_argmin.max((x_in_min(&feed)? - best.1).abs());
    }
    ok &= worst_rel < 0.05 && worst_argmin <= 0.01;

    let lossless = FeedlineSpec::new(Complex64::new(0.0, 1.31), Complex64::new(50.38, 0.0), 0.5)?;
    let mut worst_lossless: f64 = 0.0;
    for &x in grid.iter().step_by(100) {
        worst_lossless = worst_lossless.max(reff_exact(&lossless, &LoadPoint::reactive(x))?.abs());
    }
    ok &= worst_lossless < 1e-12;
    Ok(Outcome {
        passed: ok,
        detail: format!(
            "max rel gap {worst_rel:.2e}, argmin offset {worst_argmin:.4} ohm, lossless {worst_lossless:.1e} ohm"
        ),
    })
}

fn extract_via(data: &TouchstoneData, format: DataFormat, spec: &DeembedSpec) -> Result<ExtractedRlc> {
    let text = write_touchstone(
        data,
        &WriteOptions {
            unit: FrequencyUnit::Hz,
            format,
            reference: None,
        },
    );
    extract_rlc(&parse_touchstone(&text)?, spec, &ExtractOptions::default())
}

fn criterion_7() -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    let mut worst_format: f64 = 0.0;
    for _ in 0..100 {
        let r = rng.random_range(0.05..1.0);
        let l = rng.random_range(0.1e-6..1e-6);
        let c = rng.random_range(10e-12..200e-12);
        let theta = rng.random_range(0.0..60.0);
        let spec = DeembedSpec::new(rng.random_range(10.0..100.0), theta, 30e6)?;
        let f0 = 1.0 / (2.0 * PI * (l * c as f64).sqrt());
        let freqs = linear_grid(0.8 * f0, 1.2 * f0, 0.4 * f0 / 2000.0)?;
        let z = series_rlc_behind_feed(r, l, c, &spec, &freqs);
        let s = z.iter().map(|&z| s_from_z(z, 50.0)).collect();
        let data = TouchstoneData::one_port(freqs, s, 50.0)?;

        let ri = extract_via(&data, DataFormat::Ri, &spec)?;
        for (got, truth) in [(ri.r, r), (ri.l, l), (ri.c, c)] {
            worst = worst.max((got / truth - 1.0).abs());
        }
        for format in [DataFormat::Ma, DataFormat::Db] {
            let other = extract_via(&data, format, &spec)?;
            for (a, b) in [(ri.r, other.r), (ri.l, other.l), (ri.c, other.c)] {
                worst_format = worst_format.max((a / b - 1.0).abs());
            }
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-3 && worst_format <= 1e-9,
        detail: format!("worst recovery error {worst:.2e}, worst format gap {worst_format:.2e}"),
    })
}

fn microstrip_pair() -> Result<CoupledPair> {
    let rlc = model(&presets::microstrip_loop(10e-3))?;
    CoupledPair::coaxial(rlc.clone(), rlc, presets::LOOP_RADIUS, presets::LOOP_RADIUS, 0.10)
}

fn criterion_8() -> Result<Outcome> {
    let pair = microstrip_pair()?;
    let grid = linear_grid(25e6, 60e6, 10e3)?;
    let (_, curve) = lmatch_bandwidth(&pair, 42.8e6, 50.0, &grid)?;
    let bw = curve.bandwidth.unwrap_or(f64::NAN);
    Ok(Outcome {
        passed: curve.peak >= 0.90 && (3e6..=12e6).contains(&bw),
        detail: format!(
            "M = {:.4e} H, peak {:.4} at {:.3} MHz, 3-dB bandwidth {:.3} MHz",
            pair.mutual,
            curve.peak,
            curve.peak_frequency / 1e6,
            bw / 1e6
        ),
    })
}

fn criterion_9() -> Result<Outcome> {
    let pair = microstrip_pair()?;
    let f0 = pair.loop1.f0;
    let mut ok = true;
    let mut margin = f64::INFINITY;
    for scale in [0.9, 0.95, 1.0, 1.05, 1.1] {
        let f = f0 * scale;
        let z_opt = pair.optimal_termination(f)?;
        let eta_opt = pair.efficiency(&Termination::conjugate_source(z_opt, z_opt.conj()), f).1;
        let x_span = z_opt.re.max(z_opt.im.abs());
        for i in 0..=100 {
            let r_l = z_opt.re * (0.5 + i as f64 / 100.0);
            for j in 0..=100 {
                let x_l = z_opt.im + x_span * (j as f64 / 50.0 - 1.0);
                let z = Complex64::new(r_l, x_l);
                let eta = pair.efficiency(&Termination::conjugate_source(z, z.conj()), f).1;
                ok &= eta <= eta_opt * (1.0 + 1e-9);
                margin = margin.min((eta_opt - eta) / eta_opt);
            }
        }
    }
    Ok(Outcome {
        passed: ok,
        detail: format!("smallest relative margin {margin:.2e} over 5 x 101 x 101 samples"),
    })
}

/// Neumann double integral with n equally spaced points per loop.
fn neumann(a1: f64, a2: f64, d: f64, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let dphi = (i as f64 - j as f64) * h;
            let dist = (a1 * a1 + a2 * a2 - 2.0 * a1 * a2 * dphi.cos() + d * d).sqrt();
            sum += a1 * a2 * dphi.cos() / dist;
        }
    }
    MU0 / (4.0 * PI) * sum * h * h
}

fn criterion_10() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for d in [0.05, 0.10, 0.20] {
        let m = mutual_inductance_coaxial(0.09, 0.09, d)?;
        worst = worst.max((m / neumann(0.09, 0.09, d, 100) - 1.0).abs());
    }
    Ok(Outcome {
        passed: worst <= 1e-3,
        detail: format!("worst deviation from Neumann sum {worst:.2e}"),
    })
}

fn main() {
    let criteria: [(u32, &str, fn() -> Result<Outcome>); 10] = [
        (1, "stripline model row", criterion_1),
        (2, "microstrip model row", criterion_2),
        (3, "width trends", criterion_3),
        (4, "slit-shift capacitance law", criterion_4),
        (5, "feed microstrip line parameters", criterion_5),
        (6, "feedline R_EFF consistency", criterion_6),
        (7, "extraction round trip", criterion_7),
        (8, "coupled-link L-match efficiency", criterion_8),
        (9, "optimal termination", criterion_9),
        (10, "mutual inductance oracle", criterion_10),
    ];
    let start = Instant::now();
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let outcome = run().unwrap_or_else(|e| Outcome {
            passed: false,
            detail: format!("error: {e}"),
        });
        let known = KNOWN_DEVIATIONS.contains(&id);
        let status = match (outcome.passed, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known deviation)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2} {status}: {name}: {}", outcome.detail);
        if !outcome.passed && !known {
            unexpected.push(id);
        }
    }
    println!("acceptance suite finished in {:.2} s", start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
