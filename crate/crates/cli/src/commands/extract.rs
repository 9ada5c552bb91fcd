use std::fs;
use std::path::Path;

use loopkit::extraction::{extract_rlc, parse_touchstone, DeembedSpec, ExtractOptions, TouchstoneWarning};
use loopkit::Error;

use super::Context;
use crate::error::{CliError, CliResult};
use crate::output::{num, plain, si, Csv, Report};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub z0_feed: f64,
    pub theta_deg: f64,
    pub f_ref: Option<f64>,
    /// One-based port number.
    pub port: usize,
    pub fit_offset: f64,
}

pub const COLUMNS: [&str; 8] = ["f0_hz", "l_h", "c_f", "r_ohm", "q", "f1_hz", "f2_hz", "fit_residual"];

fn data_error(path: &Path, e: Error) -> CliError {
    match e {
        Error::Touchstone { line, message } => CliError::Data(format!("{}:{line}: {message}", path.display())),
        e => CliError::Data(format!("{}: {e}", path.display())),
    }
}

pub fn run(ctx: &Context, path: &Path, o: Options) -> CliResult<()> {
    let spec = match (o.theta_deg, o.f_ref) {
        (t, _) if t == 0.0 => DeembedSpec::new(o.z0_feed, 0.0, o.f_ref.unwrap_or(1.0)),
        (t, Some(f)) => DeembedSpec::new(o.z0_feed, t, f),
        (_, None) => return Err(CliError::config("--theta-deg needs --f-ref")),
    }
    .map_err(|e| CliError::config(format!("de-embedding: {e}")))?;
    if o.port == 0 {
        return Err(CliError::config("--port counts from 1"));
    }
    if !(o.fit_offset > 0.0 && o.fit_offset < 0.5) {
        return Err(CliError::config("--fit-offset must lie in (0, 0.5)"));
    }

    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let data = parse_touchstone(&text).map_err(|e| data_error(path, e))?;
    let opts = ExtractOptions {
        port: o.port - 1,
        fit_offset: o.fit_offset,
    };
    let x = extract_rlc(&data, &spec, &opts).map_err(|e| data_error(path, e))?;

    let mut csv = Csv::new(&COLUMNS);
    let d = &x.diagnostics;
    csv.push(
        [x.f0, x.l, x.c, x.r, x.q, d.f1, d.f2, d.residual]
            .iter()
            .map(|&v| num(v))
            .collect(),
    );

    let mut report = Report::new();
    report.heading(format!(
        "{}: {}-port, {} points, reference {}",
        path.display(),
        data.ports,
        data.len(),
        si(data.reference, "Ω")
    ));
    if spec.electrical_length_deg > 0.0 {
        report.field(
            "de-embedded feed",
            format!(
                "{} deg at {}, Z0 {}",
                plain(spec.electrical_length_deg, 5, ""),
                si(spec.f_ref, "Hz"),
                si(spec.z0_feed, "Ω")
            ),
        );
    }
    report.field("resonant frequency", si(x.f0, "Hz"));
    report.field("inductance", si(x.l, "H"));
    report.field("capacitance", si(x.c, "F"));
    report.field("resistance", si(x.r, "Ω"));
    report.field("quality factor", plain(x.q, 5, ""));
    report.field("fit frequencies", format!("{}, {}", si(d.f1, "Hz"), si(d.f2, "Hz")));
    report.field("fit residual", format!("{:.3e}", d.residual));
    for w in &data.warnings {
        let TouchstoneWarning::NonPassive { line, magnitude } = w;
        ctx.warn(
            &mut report,
            &format!("{}:{line}: |S| = {magnitude:.4} exceeds 1", path.display()),
        );
    }
    for f in &d.other_crossings {
        ctx.warn(&mut report, &format!("further upward reactance crossing at {}", si(*f, "Hz")));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    ctx.sink.emit(&format!("extract-{stem}"), report.finish(), &csv)
}
