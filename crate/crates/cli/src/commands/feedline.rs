use loopkit::coupling::linear_grid;
use loopkit::feedline::{
    reff_curve, reff_exact, simplification_warnings, x_in_min, x_in_min_modulus, LoadPoint, SimplificationWarning,
};
use loopkit::Error;

use super::Context;
use crate::error::{model_error, CliError, CliResult};
use crate::output::{num, plain, si, Csv, Report};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub length: Option<f64>,
    pub x_start: f64,
    pub x_stop: f64,
    pub x_step: f64,
}

pub const COLUMNS: [&str; 3] = ["x_in_ohm", "r_eff_exact", "r_eff_simplified"];

fn describe(w: &SimplificationWarning) -> String {
    match *w {
        SimplificationWarning::ReactiveZ0 { ratio } => {
            format!("|Z0''/Z0'| = {ratio:.3}: Z0 is not nearly real")
        }
        SimplificationWarning::LossyTanh { ratio } => {
            format!("Re/Im of tanh(gamma l) = {ratio:.3}: line is not low-loss")
        }
        SimplificationWarning::ResistiveLoad { ratio } => {
            format!("R_IN/|Z0| = {ratio:.3}: load is not nearly reactive")
        }
    }
}

pub fn run(ctx: &Context, feed_name: &str, o: Options) -> CliResult<()> {
    let def = ctx.config.feed_def(feed_name)?;
    let context = format!("feed.{feed_name}");
    let mut feed = def.spec().map_err(|e| model_error(&context, e))?;
    if let Some(l) = o.length {
        feed = feed.with_length(l).map_err(|e| model_error(&context, e))?;
    }
    let grid = linear_grid(o.x_start, o.x_stop, o.x_step).map_err(|e| CliError::config(format!("reactance grid: {e}")))?;
    let rows = reff_curve(&feed, &grid).map_err(|e| model_error(&context, e))?;

    let mut report = Report::new();
    report.heading(format!("feedline {feed_name}"));
    report.field(
        "propagation constant",
        format!("{} Np/m + j{} rad/m", plain(feed.gamma.re, 5, ""), plain(feed.gamma.im, 5, "")),
    );
    report.field(
        "characteristic impedance",
        format!(
            "{} {} j{} Ω",
            plain(feed.z0.re, 5, ""),
            if feed.z0.im < 0.0 { '-' } else { '+' },
            plain(feed.z0.im.abs(), 5, "")
        ),
    );
    report.field("length", si(feed.length, "m"));
    match (x_in_min(&feed), x_in_min_modulus(&feed)) {
        (Ok(x), Ok(x_mod)) => {
            let r = reff_exact(&feed, &LoadPoint::reactive(x)).map_err(|e| model_error(&context, e))?;
            report.field("X_IN at minimum R_EFF", si(x, "Ω"));
            report.field("  |Z0|-normalised form", si(x_mod, "Ω"));
            report.field("minimum R_EFF", si(r, "Ω"));
            for w in simplification_warnings(&feed, &LoadPoint::reactive(x)).map_err(|e| model_error(&context, e))? {
                ctx.warn(&mut report, &describe(&w));
            }
        }
        (Err(Error::NoReactanceMinimum), _) | (_, Err(Error::NoReactanceMinimum)) => {
            report.field("X_IN at minimum R_EFF", "none (R_EFF is not convex in X_IN)");
        }
        (Err(e), _) | (_, Err(e)) => return Err(model_error(&context, e)),
    }

    let mut csv = Csv::new(&COLUMNS);
    for r in &rows {
        csv.push(vec![num(r.x_in), num(r.exact), num(r.simplified)]);
    }
    ctx.sink.emit(&format!("feedline-{feed_name}"), report.finish(), &csv)
}
