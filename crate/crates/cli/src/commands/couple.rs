use loopkit::coupling::{
    lmatch_bandwidth, linear_grid, matched_efficiency_sweep, CoupledPair, Element, FeedAttachment, Topology,
    DEFAULT_FREQUENCY_STEP,
};
use loopkit::resonator::build_resonator;
use loopkit::Error;

use super::Context;
use crate::error::{model_error, CliError, CliResult};
use crate::output::{num, plain, si, Csv, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MatchMode {
    /// Load re-optimized at every frequency.
    Optimal,
    /// Fixed L-sections on both sides, designed at one frequency.
    Lmatch,
}

#[derive(Debug, Clone, Copy)]
pub enum Spacing {
    Distance(f64),
    Mutual(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub spacing: Spacing,
    pub mode: MatchMode,
    pub f_match: Option<f64>,
    pub source_resistance: f64,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    pub with_feed: bool,
}

pub const COLUMNS: [&str; 5] = ["f_hz", "eta", "eta_prime", "z_l_re", "z_l_im"];

fn element(e: &Element) -> String {
    match *e {
        Element::Inductor(l) => format!("inductor {}", si(l, "H")),
        Element::Capacitor(c) => format!("capacitor {}", si(c, "F")),
    }
}

pub fn run(ctx: &Context, loop1: &str, loop2: Option<&str>, o: Options) -> CliResult<()> {
    let loop2 = loop2.unwrap_or(loop1);
    let def1 = ctx.config.loop_def(loop1)?;
    let def2 = ctx.config.loop_def(loop2)?;
    let rlc1 = build_resonator(&def1.geometry, &def1.options).map_err(|e| model_error(&format!("loop.{loop1}"), e))?;
    let rlc2 = build_resonator(&def2.geometry, &def2.options).map_err(|e| model_error(&format!("loop.{loop2}"), e))?;

    let pair = match o.spacing {
        Spacing::Distance(d) => CoupledPair::coaxial(
            rlc1,
            rlc2,
            def1.geometry.loop_radius,
            def2.geometry.loop_radius,
            d,
        ),
        Spacing::Mutual(m) => CoupledPair::new(rlc1, rlc2, m),
    }
    .map_err(|e| CliError::config(format!("coupling: {e}")))?;

    let centre = match o.mode {
        MatchMode::Optimal => pair.loop1.f0,
        MatchMode::Lmatch => o.f_match.unwrap_or(pair.loop1.f0),
    };
    let start = o.start.unwrap_or(0.5 * centre);
    let stop = o.stop.unwrap_or(1.5 * centre);
    let step = o.step.unwrap_or(DEFAULT_FREQUENCY_STEP);
    let grid = linear_grid(start, stop, step).map_err(|e| CliError::config(format!("frequency grid: {e}")))?;

    let couple_error = |e: Error| match e {
        Error::AsymmetricPair => CliError::config(format!(
            "loops '{loop1}' and '{loop2}' differ; matched efficiency needs identical loops"
        )),
        e => CliError::config(format!("coupling: {e}")),
    };
    let mut report = Report::new();
    report.heading(format!("coupled loops {loop1} and {loop2}"));
    if let Some(d) = pair.distance {
        report.field("distance", si(d, "m"));
    }
    report.field("mutual inductance", si(pair.mutual, "H"));
    report.field("coupling coefficient", plain(pair.coupling_coefficient(), 5, ""));

    let curve = match o.mode {
        MatchMode::Optimal => {
            let feed = o.with_feed.then(|| FeedAttachment::from_geometry(&def1.geometry));
            report.field(
                "termination",
                if o.with_feed {
                    "optimal load at each frequency, feedline loss included"
                } else {
                    "optimal load at each frequency"
                },
            );
            matched_efficiency_sweep(&pair, &grid, feed.as_ref()).map_err(couple_error)?
        }
        MatchMode::Lmatch => {
            if o.with_feed {
                return Err(CliError::config("--with-feed applies to --match optimal only"));
            }
            let f_match = o.f_match.unwrap_or(pair.loop1.f0);
            let (network, curve) =
                lmatch_bandwidth(&pair, f_match, o.source_resistance, &grid).map_err(couple_error)?;
            report.field(
                "L-match",
                format!("designed at {} for {}", si(f_match, "Hz"), si(o.source_resistance, "Ω")),
            );
            let order = match network.topology {
                Topology::ShuntFirst => "shunt element at the loop",
                Topology::SeriesFirst => "series element at the loop",
            };
            report.field("  topology", order);
            report.field("  series", element(&network.series));
            report.field("  shunt", element(&network.shunt));
            curve
        }
    };

    report.field("peak efficiency", format!("{} %", plain(curve.peak * 100.0, 4, "")));
    report.field("at", si(curve.peak_frequency, "Hz"));
    report.field(
        "3-dB bandwidth",
        curve
            .bandwidth
            .map_or_else(|| "not resolved within the grid".to_string(), |bw| si(bw, "Hz")),
    );
    report.field(
        "grid",
        format!("{} to {} in {} points", si(start, "Hz"), si(stop, "Hz"), grid.len()),
    );

    let mut csv = Csv::new(&COLUMNS);
    for i in 0..curve.frequencies.len() {
        csv.push(vec![
            num(curve.frequencies[i]),
            num(curve.eta[i]),
            num(curve.eta_prime[i]),
            num(curve.z_l[i].re),
            num(curve.z_l[i].im),
        ]);
    }
    ctx.sink.emit(&format!("couple-{loop1}-{loop2}"), report.finish(), &csv)
}
