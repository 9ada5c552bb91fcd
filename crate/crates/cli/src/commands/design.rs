use loopkit::resonator::build_resonator;

use super::{describe_warning, design_row, Context, DESIGN_COLUMNS};
use crate::error::{model_error, CliResult};
use crate::output::{plain, si, Csv, Report};

pub fn run(ctx: &Context, loop_name: &str) -> CliResult<()> {
    let def = ctx.config.loop_def(loop_name)?;
    let rlc = build_resonator(&def.geometry, &def.options).map_err(|e| model_error(&format!("loop.{loop_name}"), e))?;

    let mut csv = Csv::new(&DESIGN_COLUMNS);
    csv.push(design_row(&rlc));

    let mut report = Report::new();
    report.heading(format!("loop {loop_name}: {}", def.describe()));
    report.field("resonant frequency", si(rlc.f0, "Hz"));
    report.field("inductance", si(rlc.l, "H"));
    report.field("capacitance", si(rlc.c, "F"));
    report.field("resistance", si(rlc.r, "Ω"));
    report.field("quality factor", plain(rlc.q(), 5, ""));
    if let Some(s) = &rlc.synthesis {
        let b = s.breakdown;
        report.field("  radiation", si(b.radiation, "Ω"));
        report.field("  loop conductor", si(b.conductor, "Ω"));
        report.field("  stub ESR", si(b.esr, "Ω"));
        report.field("  feed", si(b.feed, "Ω"));
        report.field("stub length", si(s.stub_length, "m"));
        report.field("feed length", si(s.feed_length, "m"));
        report.field("line Z0", si(s.line.z0, "Ω"));
        report.field("line eps_eff", plain(s.line.eps_eff, 5, ""));
        report.field("iterations", s.iterations.to_string());
        for w in &s.warnings {
            ctx.warn(&mut report, &describe_warning(w));
        }
    }
    ctx.sink.emit(&format!("design-{loop_name}"), report.finish(), &csv)
}
