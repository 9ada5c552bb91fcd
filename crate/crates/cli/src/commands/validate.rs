//! Replays the published model rows and trend checks against the fixtures.

use std::f64::consts::PI;
use std::time::Instant;

use loopkit::coupling::{
    lmatch_bandwidth, linear_grid, mutual_inductance_coaxial, CoupledPair, Termination,
};
use loopkit::extraction::synth::series_rlc_behind_feed;
use loopkit::extraction::{
    extract_rlc, parse_touchstone, s_from_z, write_touchstone, DataFormat, DeembedSpec, ExtractOptions,
    FrequencyUnit, TouchstoneData, WriteOptions,
};
use loopkit::feedline::{reff_exact, reff_simplified, x_in_min, FeedlineSpec, LoadPoint};
use loopkit::presets;
use loopkit::resonator::{build_resonator, LoopGeometry, LoopRlc, ModelOptions};
use loopkit::tline::rlgc;
use loopkit::constants::MU0;
use loopkit::Complex64;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use super::Context;
use crate::config::LoopDef;
use crate::error::{CliError, CliResult};
use crate::fixtures::{self, FixtureTable, FIXTURE_SHA256};
use crate::output::{num, plain, si, Csv, Report};

/// Overridable tolerances and their defaults.
pub const TOLERANCES: [(&str, f64); 19] = [
    ("model_f0", 0.03),
    ("model_l", 0.03),
    ("model_c", 0.08),
    ("model_r", 0.30),
    ("model_q", 0.25),
    ("model_runtime", 1.0),
    ("width_f0", 0.15),
    ("slit_model_ratio", 1e-12),
    ("slit_ratio", 0.10),
    ("feed_alpha", 0.15),
    ("feed_beta", 0.03),
    ("feed_z0", 0.05),
    ("reff_gap", 0.05),
    ("reff_argmin", 0.01),
    ("reff_lossless", 1e-12),
    ("extraction", 1e-3),
    ("extraction_format", 1e-9),
    ("optimal_termination", 1e-9),
    ("mutual", 1e-3),
];

/// Coupled-link limits: a minimum peak efficiency and a factor on the
/// published bandwidth.
pub const LINK_TOLERANCES: [(&str, f64); 2] = [("lmatch_peak", 0.90), ("lmatch_bandwidth", 2.0)];

pub fn tolerance_keys() -> Vec<&'static str> {
    TOLERANCES.iter().chain(&LINK_TOLERANCES).map(|(k, _)| *k).collect()
}

// Published line constants of the feed microstrip at 40 MHz.
const FEED_ALPHA: f64 = 0.0105;
const FEED_BETA: f64 = 1.31;
const FEED_Z0_RE: f64 = 50.38;
const FEED_Z0_IM: f64 = -0.3585;

// Published coupled-link result: two microstrip loops 10 cm apart,
// L-matched at 42.8 MHz.
const LINK_DISTANCE: f64 = 0.10;
const LINK_MATCH_FREQUENCY: f64 = 42.8e6;
const LINK_PEAK: f64 = 0.96;
const LINK_BANDWIDTH: f64 = 6e6;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Relative(f64),
    Absolute(f64),
    /// Computed value must reach this minimum.
    Minimum(f64),
    /// Computed value within expected ÷ f .. expected × f.
    Factor(f64),
    Exact,
}

impl Tolerance {
    fn kind(self) -> &'static str {
        match self {
            Tolerance::Relative(_) => "relative",
            Tolerance::Absolute(_) => "absolute",
            Tolerance::Minimum(_) => "minimum",
            Tolerance::Factor(_) => "factor",
            Tolerance::Exact => "exact",
        }
    }

    fn amount(self) -> Option<f64> {
        match self {
            Tolerance::Relative(t) | Tolerance::Absolute(t) | Tolerance::Minimum(t) | Tolerance::Factor(t) => Some(t),
            Tolerance::Exact => None,
        }
    }

    fn accepts(self, expected: &Value, computed: &Value) -> bool {
        match (expected, computed) {
            (Value::Num(e), Value::Num(c)) => match self {
                Tolerance::Relative(t) => (c - e).abs() <= t * e.abs(),
                Tolerance::Absolute(t) => (c - e).abs() <= t,
                Tolerance::Minimum(m) => *c >= m,
                Tolerance::Factor(f) => *c >= e / f && *c <= e * f,
                Tolerance::Exact => c == e,
            },
            (Value::Text(e), Value::Text(c)) => self == Tolerance::Exact && e == c,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub unit: &'static str,
    pub expected: Value,
    pub computed: Value,
    pub tolerance: Tolerance,
    pub passed: bool,
}

#[derive(Default)]
struct Checks {
    list: Vec<Check>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, unit: &'static str, expected: Value, computed: Value, tolerance: Tolerance) {
        let passed = tolerance.accepts(&expected, &computed);
        self.list.push(Check {
            name: name.into(),
            unit,
            expected,
            computed,
            tolerance,
            passed,
        });
    }

    fn num(
        &mut self,
        name: impl Into<String>,
        unit: &'static str,
        expected: f64,
        computed: Result<f64, String>,
        tolerance: Tolerance,
    ) {
        let computed = computed.map_or_else(|e| Value::Text(format!("error: {e}")), Value::Num);
        self.push(name, unit, Value::Num(expected), computed, tolerance);
    }

    fn text(&mut self, name: impl Into<String>, expected: &str, computed: Result<&str, String>) {
        let computed = Value::Text(computed.map_or_else(|e| format!("error: {e}"), str::to_string));
        self.push(name, "", Value::Text(expected.to_string()), computed, Tolerance::Exact);
    }
}

struct Setup<'a> {
    ctx: &'a Context,
    stripline: &'a LoopDef,
    microstrip: &'a LoopDef,
}

impl Setup<'_> {
    fn tol(&self, key: &str) -> f64 {
        let default = TOLERANCES
            .iter()
            .chain(&LINK_TOLERANCES)
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .expect("registered tolerance");
        self.ctx.config.tolerance(key, default)
    }
}

fn build(g: &LoopGeometry, options: &ModelOptions) -> Result<LoopRlc, String> {
    g.validate().and_then(|_| build_resonator(g, options)).map_err(|e| e.to_string())
}

fn fixture(id: &str) -> &'static FixtureTable {
    fixtures::table(id).expect("shipped fixture")
}

/// Strip width in metres from a row label such as "4 mm".
fn label_width(label: &str) -> f64 {
    label.trim_end_matches(" mm").parse::<f64>().expect("width label") * 1e-3
}

fn model_rows(s: &Setup, checks: &mut Checks) {
    for (def, table) in [(s.stripline, "stripline-comparison"), (s.microstrip, "microstrip-comparison")] {
        let row = fixture(table).row("model").expect("model row");
        let start = Instant::now();
        let rlc = build(&def.geometry, &def.options);
        let elapsed = start.elapsed().as_secs_f64();
        let prefix = format!("model.{}", def.name);
        let get = |f: fn(&LoopRlc) -> f64| rlc.as_ref().map(f).map_err(Clone::clone);
        checks.num(format!("{prefix}.f0"), "Hz", row.f0_mhz() * 1e6, get(|r| r.f0), Tolerance::Relative(s.tol("model_f0")));
        checks.num(format!("{prefix}.l"), "H", row.l_uh() * 1e-6, get(|r| r.l), Tolerance::Relative(s.tol("model_l")));
        checks.num(format!("{prefix}.c"), "F", row.c_pf() * 1e-12, get(|r| r.c), Tolerance::Relative(s.tol("model_c")));
        checks.num(format!("{prefix}.r"), "Ω", row.r_ohm(), get(|r| r.r), Tolerance::Relative(s.tol("model_r")));
        checks.num(format!("{prefix}.q"), "", row.q(), get(|r| r.q()), Tolerance::Relative(s.tol("model_q")));
        if def.name == s.stripline.name {
            checks.num(
                format!("{prefix}.runtime"),
                "s",
                0.0,
                Ok(elapsed),
                Tolerance::Absolute(s.tol("model_runtime")),
            );
        }
    }
}

fn width_trends(s: &Setup, checks: &mut Checks) {
    for (def, table) in [(s.stripline, "stripline"), (s.microstrip, "microstrip")] {
        let table = fixture(table);
        let rows: Vec<(f64, Result<LoopRlc, String>)> = table
            .rows
            .iter()
            .map(|r| {
                let w = label_width(r.label);
                (w, build(&def.geometry.with_strip_width(w), &def.options))
            })
            .collect();
        let prefix = format!("width.{}", def.name);
        let all: Result<Vec<&LoopRlc>, String> = rows.iter().map(|(_, r)| r.as_ref().map_err(Clone::clone)).collect();
        let monotone = |f: fn(&LoopRlc) -> f64, increasing: bool| {
            all.clone().map(|v| {
                let ok = v.windows(2).all(|p| if increasing { f(p[1]) > f(p[0]) } else { f(p[1]) < f(p[0]) });
                match (ok, increasing) {
                    (true, true) => "strictly increasing",
                    (true, false) => "strictly decreasing",
                    (false, _) => "not monotone",
                }
            })
        };
        checks.text(format!("{prefix}.f0-trend"), "strictly decreasing", monotone(|r| r.f0, false));
        checks.text(format!("{prefix}.q-trend"), "strictly increasing", monotone(|r| r.q(), true));
        for (fixture_row, (_, rlc)) in table.rows.iter().zip(&rows) {
            checks.num(
                format!("{prefix}.f0.{}", fixture_row.label.replace(' ', "")),
                "Hz",
                fixture_row.f0_mhz() * 1e6,
                rlc.as_ref().map(|r| r.f0).map_err(Clone::clone),
                Tolerance::Relative(s.tol("width_f0")),
            );
        }
    }
}

fn slit_shift(s: &Setup, checks: &mut Checks) {
    let g = &s.stripline.geometry;
    let opts = &s.stripline.options;
    let shifted_angle = 10f64.to_radians();
    let ratio = build(g, opts).and_then(|a| {
        build(&g.with_slit_angle(shifted_angle), opts).map(|b| b.c / a.c)
    });
    let law = (2.0 * PI - shifted_angle) / (2.0 * PI - g.slit_angle);
    checks.num(
        format!("slit.{}.model-ratio", s.stripline.name),
        "",
        law,
        ratio.clone(),
        Tolerance::Relative(s.tol("slit_model_ratio")),
    );
    let centred = fixture("stripline");
    let shifted = fixture("stripline-shifted");
    for (a, b) in centred.rows.iter().zip(shifted.rows) {
        checks.num(
            format!("slit.fixture-ratio.{}", a.label.replace(' ', "")),
            "",
            b.c_pf() / a.c_pf(),
            ratio.clone(),
            Tolerance::Relative(s.tol("slit_ratio")),
        );
    }
}

fn feed_line(s: &Setup, checks: &mut Checks) {
    let (cs, d, c) = presets::feed_microstrip();
    let line = rlgc(&cs, &d, &c, presets::FEED_FREQUENCY).map_err(|e| e.to_string());
    let get = |f: fn(&loopkit::tline::TLineParams) -> f64| line.as_ref().map(f).map_err(Clone::clone);
    checks.num("feed.alpha", "Np/m", FEED_ALPHA, get(|l| l.gamma.re), Tolerance::Relative(s.tol("feed_alpha")));
    checks.num("feed.beta", "rad/m", FEED_BETA, get(|l| l.gamma.im), Tolerance::Relative(s.tol("feed_beta")));
    checks.num("feed.z0", "Ω", FEED_Z0_RE, get(|l| l.z0_complex.re), Tolerance::Relative(s.tol("feed_z0")));
}

fn reff(s: &Setup, checks: &mut Checks) {
    let gamma = Complex64::new(FEED_ALPHA, FEED_BETA);
    let z0 = Complex64::new(FEED_Z0_RE, FEED_Z0_IM);
    let grid: Vec<f64> = (0..=40_000).map(|i| -200.0 + i as f64 * 0.01).collect();
    let mut worst_gap: Result<f64, String> = Ok(0.0);
    for l in [0.1, 0.25, 0.5] {
        let result = (|| -> loopkit::Result<(f64, f64, f64)> {
            let feed = FeedlineSpec::new(gamma, z0, l)?;
            let mut gap: f64 = 0.0;
            let mut best = (f64::INFINITY, 0.0);
            for &x in &grid {
                let load = LoadPoint::reactive(x);
                let exact = reff_exact(&feed, &load)?;
                let simple = reff_simplified(&feed, &load)?;
                gap = gap.max((exact - simple).abs() / exact);
                if simple < best.0 {
                    best = (simple, x);
                }
            }
            Ok((gap, best.1, x_in_min(&feed)?))
        })()
        .map_err(|e| e.to_string());
        match &result {
            Ok((gap, _, _)) => worst_gap = worst_gap.map(|w| w.max(*gap)),
            Err(e) => worst_gap = Err(e.clone()),
        }
        let (expected, computed) = match result {
            Ok((_, argmin, x)) => (argmin, Ok(x)),
            Err(e) => (f64::NAN, Err(e)),
        };
        checks.num(
            format!("reff.argmin.{}cm", (l * 100.0).round()),
            "Ω",
            expected,
            computed,
            Tolerance::Absolute(s.tol("reff_argmin")),
        );
    }
    checks.num("reff.exact-vs-simplified", "", 0.0, worst_gap, Tolerance::Absolute(s.tol("reff_gap")));

    let lossless = FeedlineSpec::new(Complex64::new(0.0, FEED_BETA), Complex64::new(FEED_Z0_RE, 0.0), 0.5)
        .and_then(|feed| {
            grid.iter()
                .step_by(100)
                .try_fold(0.0f64, |w, &x| Ok(w.max(reff_exact(&feed, &LoadPoint::reactive(x))?.abs())))
        })
        .map_err(|e| e.to_string());
    checks.num("reff.lossless", "Ω", 0.0, lossless, Tolerance::Absolute(s.tol("reff_lossless")));
}

fn extraction(s: &Setup, checks: &mut Checks) {
    let run = || -> loopkit::Result<(f64, f64)> {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let mut worst: f64 = 0.0;
        let mut worst_format: f64 = 0.0;
        for _ in 0..100 {
            let r = rng.random_range(0.05..1.0);
            let l = rng.random_range(0.1e-6..1e-6);
            let c: f64 = rng.random_range(10e-12..200e-12);
            let theta = rng.random_range(0.0..60.0);
            let spec = DeembedSpec::new(rng.random_range(10.0..100.0), theta, 30e6)?;
            let f0 = 1.0 / (2.0 * PI * (l * c).sqrt());
            let freqs = linear_grid(0.8 * f0, 1.2 * f0, 0.4 * f0 / 2000.0)?;
            let z = series_rlc_behind_feed(r, l, c, &spec, &freqs);
            let s11 = z.iter().map(|&z| s_from_z(z, 50.0)).collect();
            let data = TouchstoneData::one_port(freqs, s11, 50.0)?;
            let via = |format| {
                let text = write_touchstone(
                    &data,
                    &WriteOptions {
                        unit: FrequencyUnit::Hz,
                        format,
                        reference: None,
                    },
                );
                extract_rlc(&parse_touchstone(&text)?, &spec, &ExtractOptions::default())
            };
            let ri = via(DataFormat::Ri)?;
            for (got, truth) in [(ri.r, r), (ri.l, l), (ri.c, c)] {
                worst = worst.max((got / truth - 1.0).abs());
            }
            for format in [DataFormat::Ma, DataFormat::Db] {
                let other = via(format)?;
                for (a, b) in [(ri.r, other.r), (ri.l, other.l), (ri.c, other.c)] {
                    worst_format = worst_format.max((a / b - 1.0).abs());
                }
            }
        }
        Ok((worst, worst_format))
    };
    let result = run().map_err(|e| e.to_string());
    checks.num(
        "extraction.recovery",
        "",
        0.0,
        result.clone().map(|r| r.0),
        Tolerance::Absolute(s.tol("extraction")),
    );
    checks.num(
        "extraction.format-agreement",
        "",
        0.0,
        result.map(|r| r.1),
        Tolerance::Absolute(s.tol("extraction_format")),
    );
}

fn coupled_link(s: &Setup, checks: &mut Checks) {
    let def = s.microstrip;
    let pair = build(&def.geometry, &def.options).and_then(|rlc| {
        CoupledPair::coaxial(rlc.clone(), rlc, def.geometry.loop_radius, def.geometry.loop_radius, LINK_DISTANCE)
            .map_err(|e| e.to_string())
    });
    let curve = pair.clone().and_then(|pair| {
        let grid = linear_grid(25e6, 60e6, 10e3).map_err(|e| e.to_string())?;
        lmatch_bandwidth(&pair, LINK_MATCH_FREQUENCY, 50.0, &grid)
            .map(|(_, c)| c)
            .map_err(|e| e.to_string())
    });
    let prefix = format!("link.{}", def.name);
    checks.num(
        format!("{prefix}.peak"),
        "",
        LINK_PEAK,
        curve.as_ref().map(|c| c.peak).map_err(Clone::clone),
        Tolerance::Minimum(s.tol("lmatch_peak")),
    );
    checks.num(
        format!("{prefix}.bandwidth"),
        "Hz",
        LINK_BANDWIDTH,
        curve
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|c| c.bandwidth.ok_or_else(|| "3-dB points outside the grid".to_string())),
        Tolerance::Factor(s.tol("lmatch_bandwidth")),
    );

    let excess = pair.and_then(|pair| {
        let mut worst = f64::NEG_INFINITY;
        for scale in [0.9, 0.95, 1.0, 1.05, 1.1] {
            let f = pair.loop1.f0 * scale;
            let z_opt = pair.optimal_termination(f).map_err(|e| e.to_string())?;
            let eta_opt = pair.efficiency(&Termination::conjugate_source(z_opt, z_opt.conj()), f).1;
            let x_span = z_opt.re.max(z_opt.im.abs());
            for i in 0..=100 {
                let r_l = z_opt.re * (0.5 + i as f64 / 100.0);
                for j in 0..=100 {
                    let z = Complex64::new(r_l, z_opt.im + x_span * (j as f64 / 50.0 - 1.0));
                    let eta = pair.efficiency(&Termination::conjugate_source(z, z.conj()), f).1;
                    worst = worst.max((eta - eta_opt) / eta_opt);
                }
            }
        }
        Ok(worst.max(0.0))
    });
    checks.num(
        format!("{prefix}.optimal-termination"),
        "",
        0.0,
        excess,
        Tolerance::Absolute(s.tol("optimal_termination")),
    );
}

/// Neumann double sum over n points per loop.
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

fn mutual(s: &Setup, checks: &mut Checks) {
    let a = presets::LOOP_RADIUS;
    for d in [0.05_f64, 0.10, 0.20] {
        checks.num(
            format!("mutual.{}cm", (d * 100.0).round()),
            "H",
            neumann(a, a, d, 100),
            mutual_inductance_coaxial(a, a, d).map_err(|e| e.to_string()),
            Tolerance::Relative(s.tol("mutual")),
        );
    }
}

fn integrity(checks: &mut Checks) {
    checks.text("fixtures.sha256", FIXTURE_SHA256, Ok(&fixtures::digest(&fixtures::TABLES)));
}

pub fn compute(ctx: &Context) -> CliResult<Vec<Check>> {
    let setup = Setup {
        ctx,
        stripline: ctx.config.loop_def("stripline")?,
        microstrip: ctx.config.loop_def("microstrip")?,
    };
    let mut checks = Checks::default();
    integrity(&mut checks);
    model_rows(&setup, &mut checks);
    width_trends(&setup, &mut checks);
    slit_shift(&setup, &mut checks);
    feed_line(&setup, &mut checks);
    reff(&setup, &mut checks);
    extraction(&setup, &mut checks);
    coupled_link(&setup, &mut checks);
    mutual(&setup, &mut checks);
    Ok(checks.list)
}

/// Units that take SI prefixes in the report.
const PREFIXED: [&str; 5] = ["Hz", "H", "F", "Ω", "s"];

fn show(v: &Value, unit: &str, digits: usize) -> String {
    match v {
        Value::Text(t) => t.clone(),
        Value::Num(x) if PREFIXED.contains(&unit) && *x != 0.0 => si(*x, unit),
        Value::Num(x) if *x == 0.0 || (1e-3..1e6).contains(&x.abs()) => plain(*x, digits, unit),
        Value::Num(x) if unit.is_empty() => format!("{x:.3e}"),
        Value::Num(x) => format!("{x:.3e} {unit}"),
    }
}

fn show_tolerance(t: Tolerance, unit: &str) -> String {
    match t {
        Tolerance::Relative(r) if r < 1e-3 => format!("±{r:.0e} rel"),
        Tolerance::Relative(r) => format!("±{} %", plain(r * 100.0, 3, "")),
        Tolerance::Absolute(a) => format!("±{}", show(&Value::Num(a), unit, 3)),
        Tolerance::Minimum(m) => format!("≥ {}", show(&Value::Num(m), unit, 3)),
        Tolerance::Factor(f) => format!("×/÷ {}", plain(f, 3, "")),
        Tolerance::Exact => "exact".to_string(),
    }
}

/// Hashes are cut to their first 12 hex digits in the report.
fn abbreviate(text: String) -> String {
    if text.len() == 64 && text.bytes().all(|b| b.is_ascii_hexdigit()) {
        format!("{}…", &text[..12])
    } else {
        text
    }
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::Num(x) => num(*x),
        Value::Text(t) => t.clone(),
    }
}

pub fn run(ctx: &Context) -> CliResult<()> {
    let checks = compute(ctx)?;
    let mut csv = Csv::new(&["check", "unit", "expected", "computed", "tolerance_kind", "tolerance", "verdict"]);
    let mut report = Report::new();
    report.heading("validation against the published fixtures");
    report.line(format!(
        "{:<38} {:>20} {:>20} {:>14}  verdict",
        "check", "expected", "computed", "tolerance"
    ));
    for c in &checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        csv.push(vec![
            c.name.clone(),
            c.unit.to_string(),
            csv_value(&c.expected),
            csv_value(&c.computed),
            c.tolerance.kind().to_string(),
            c.tolerance.amount().map_or_else(String::new, num),
            verdict.to_string(),
        ]);
        let expected = abbreviate(show(&c.expected, c.unit, 6));
        let computed = abbreviate(show(&c.computed, c.unit, 6));
        let mut line = format!(
            "{:<38} {:>20} {:>20} {:>14}  {verdict}",
            c.name,
            expected,
            computed,
            show_tolerance(c.tolerance, c.unit)
        );
        if let (false, Value::Num(e), Value::Num(v)) = (c.passed, &c.expected, &c.computed) {
            if *e != 0.0 {
                line.push_str(&format!(" ({:+.1} %)", (v / e - 1.0) * 100.0));
            }
        }
        report.line(line);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    report.heading(format!("{} of {} checks passed", checks.len() - failed, checks.len()));
    ctx.sink.emit("validate", report.finish(), &csv)?;
    if failed > 0 {
        return Err(CliError::Validation {
            failed,
            total: checks.len(),
        });
    }
    Ok(())
}
