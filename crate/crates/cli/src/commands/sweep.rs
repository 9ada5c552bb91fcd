use loopkit::resonator::build_resonator;

use super::{describe_warning, design_row, Context, DESIGN_COLUMNS};
use crate::config::{SweepDef, SweepParameter};
use crate::error::{CliError, CliResult};
use crate::output::{num, Csv, Report};

#[derive(Debug, Default, Clone, Copy)]
pub struct Overrides {
    pub parameter: Option<SweepParameter>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub steps: Option<usize>,
}

/// `target` names a configured sweep or, failing that, a loop swept with
/// the flags given (strip width 2 to 10 mm in 9 steps by default).
fn resolve(ctx: &Context, target: &str, o: Overrides) -> CliResult<(String, SweepDef)> {
    let mut def = match ctx.config.sweeps.get(target) {
        Some(def) => def.clone(),
        None if ctx.config.loops.contains_key(target) => {
            let parameter = o.parameter.unwrap_or(SweepParameter::StripWidth);
            let (start, stop, steps) = match parameter {
                SweepParameter::StripWidth => (2e-3, 10e-3, 9),
                SweepParameter::SlitAngle => match (o.start, o.stop, o.steps) {
                    (Some(a), Some(b), Some(n)) => (a, b, n),
                    (Some(a), None, Some(1)) => (a, a, 1),
                    _ => {
                        return Err(CliError::config(
                            "a slit-angle sweep needs --start, --stop and --steps (radians)",
                        ))
                    }
                },
            };
            SweepDef {
                loop_name: target.to_string(),
                parameter,
                start,
                stop,
                steps,
            }
        }
        None => {
            let sweeps: Vec<&str> = ctx.config.sweeps.keys().map(String::as_str).collect();
            return Err(CliError::config(format!(
                "unknown sweep or loop '{target}' (sweeps: {}; loops: {})",
                if sweeps.is_empty() { "none".to_string() } else { sweeps.join(", ") },
                ctx.config.loop_names().join(", ")
            )));
        }
    };
    if let Some(p) = o.parameter {
        def.parameter = p;
    }
    if let Some(n) = o.steps {
        def.steps = n;
    }
    if let Some(a) = o.start {
        def.start = a;
        if def.steps == 1 && o.stop.is_none() {
            def.stop = a;
        }
    }
    if let Some(b) = o.stop {
        def.stop = b;
    }
    def.check("sweep")?;
    Ok((format!("sweep-{target}"), def))
}

pub fn run(ctx: &Context, target: &str, overrides: Overrides) -> CliResult<()> {
    let (stem, def) = resolve(ctx, target, overrides)?;
    let base = ctx.config.loop_def(&def.loop_name)?;

    let mut header = vec![def.parameter.column()];
    header.extend(DESIGN_COLUMNS);
    header.push("status");
    let mut csv = Csv::new(&header);

    let mut report = Report::new();
    report.heading(format!("sweep of loop {} over {}", def.loop_name, def.parameter.column()));
    let (label, scale) = match def.parameter {
        SweepParameter::StripWidth => ("W (mm)", 1e3),
        SweepParameter::SlitAngle => ("slit (deg)", 180.0 / std::f64::consts::PI),
    };
    report.line(format!(
        "{label:>11} {:>10} {:>9} {:>9} {:>9} {:>8}",
        "f0 (MHz)", "L (µH)", "C (pF)", "R (Ω)", "Q"
    ));

    for value in def.grid() {
        let g = def.parameter.apply(&base.geometry, value);
        let mut row = vec![num(value)];
        match g.validate().and_then(|_| build_resonator(&g, &base.options)) {
            Ok(rlc) => {
                row.extend(design_row(&rlc));
                row.push("ok".to_string());
                report.line(format!(
                    "{:>11.4} {:>10.4} {:>9.4} {:>9.3} {:>9.4} {:>8.1}",
                    value * scale,
                    rlc.f0 / 1e6,
                    rlc.l * 1e6,
                    rlc.c * 1e12,
                    rlc.r,
                    rlc.q()
                ));
                if let Some(s) = &rlc.synthesis {
                    for w in &s.warnings {
                        ctx.warn(&mut report, &format!("at {:.4}: {}", value * scale, describe_warning(w)));
                    }
                }
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(String::new(), DESIGN_COLUMNS.len()));
                row.push(format!("error: {e}"));
                report.line(format!("{:>11.4} error: {e}", value * scale));
            }
        }
        csv.push(row);
    }
    ctx.sink.emit(&stem, report.finish(), &csv)
}
