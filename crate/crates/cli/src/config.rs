//! Project configuration: named loops, feeds and sweeps from an INI file,
//! layered over the built-in presets.
//!
//! ```ini
//! [loop.wide]
//! base = stripline
//! strip_width = 12e-3
//!
//! [feed.short]
//! base = microstrip-50
//! length = 0.1
//!
//! [sweep.widths]
//! loop = wide
//! parameter = strip_width
//! start = 2e-3
//! stop = 10e-3
//! steps = 9
//!
//! [output]
//! directory = results
//!
//! [tolerance]
//! model_f0 = 0.05
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use ini::{Ini, Properties};
use loopkit::feedline::FeedlineSpec;
use loopkit::presets;
use loopkit::resonator::{CapacitanceModel, Evaluation, LoopGeometry, LoopLossForm, ModelOptions};
use loopkit::tline::{rlgc, Conductor, CrossSection, Dielectric};
use loopkit::Complex64;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct LoopDef {
    pub name: String,
    pub geometry: LoopGeometry,
    pub options: ModelOptions,
}

impl LoopDef {
    pub fn kind(&self) -> &'static str {
        kind_name(&self.geometry.cross_section)
    }

    pub fn describe(&self) -> String {
        let g = &self.geometry;
        let shape = match g.cross_section {
            CrossSection::Coax {
                inner_radius,
                outer_radius,
            } => format!("coax {} / {} mm", short(inner_radius * 1e3), short(outer_radius * 1e3)),
            cs => format!(
                "{}, W = {} mm",
                self.kind(),
                short(cs.strip_width().unwrap_or(f64::NAN) * 1e3)
            ),
        };
        format!(
            "{shape}, a = {} mm, slit at {} deg, eps_r = {}, tan_delta = {}",
            short(g.loop_radius * 1e3),
            short(g.slit_angle.to_degrees()),
            g.dielectric.relative_permittivity,
            g.dielectric.loss_tangent
        )
    }
}

/// Shortest decimal form after rounding to 1e-9.
fn short(v: f64) -> String {
    format!("{}", (v * 1e9).round() / 1e9)
}

/// A feedline either given by its line constants or by a cross-section
/// evaluated at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeedDef {
    Explicit {
        gamma: Complex64,
        z0: Complex64,
        length: f64,
    },
    Line {
        cross_section: CrossSection,
        dielectric: Dielectric,
        conductor: Conductor,
        frequency: f64,
        length: f64,
    },
}

impl FeedDef {
    pub fn length(&self) -> f64 {
        match *self {
            FeedDef::Explicit { length, .. } | FeedDef::Line { length, .. } => length,
        }
    }

    pub fn spec(&self) -> loopkit::Result<FeedlineSpec> {
        match *self {
            FeedDef::Explicit { gamma, z0, length } => FeedlineSpec::new(gamma, z0, length),
            FeedDef::Line {
                cross_section,
                dielectric,
                conductor,
                frequency,
                length,
            } => FeedlineSpec::from_line(&rlgc(&cross_section, &dielectric, &conductor, frequency)?, length),
        }
    }

    fn with_length(mut self, new_length: f64) -> Self {
        match &mut self {
            FeedDef::Explicit { length, .. } | FeedDef::Line { length, .. } => *length = new_length,
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParameter {
    StripWidth,
    SlitAngle,
}

impl SweepParameter {
    pub fn column(self) -> &'static str {
        match self {
            SweepParameter::StripWidth => "strip_width_m",
            SweepParameter::SlitAngle => "slit_angle_rad",
        }
    }

    pub fn apply(self, g: &LoopGeometry, value: f64) -> LoopGeometry {
        match self {
            SweepParameter::StripWidth => g.with_strip_width(value),
            SweepParameter::SlitAngle => g.with_slit_angle(value),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepDef {
    pub loop_name: String,
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepDef {
    pub fn check(&self, context: &str) -> CliResult<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::config(format!("{context}: start and stop must be finite")));
        }
        if self.steps == 0 {
            return Err(CliError::config(format!("{context}.steps: must be at least 1")));
        }
        if self.steps > 1 && !(self.stop > self.start) {
            return Err(CliError::config(format!(
                "{context}: stop ({}) must exceed start ({}) when steps > 1",
                self.stop, self.start
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + i as f64 * h).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ProjectConfig {
    pub loops: BTreeMap<String, LoopDef>,
    pub feeds: BTreeMap<String, FeedDef>,
    pub sweeps: BTreeMap<String, SweepDef>,
    pub output_directory: Option<PathBuf>,
    pub tolerances: BTreeMap<String, f64>,
}

const NAME_HINT: &str = "names may contain letters, digits, '-' and '_'";

pub fn builtin_loops() -> BTreeMap<String, LoopDef> {
    let shifted = 10f64.to_radians();
    [
        ("stripline", presets::stripline_loop(10e-3)),
        ("microstrip", presets::microstrip_loop(10e-3)),
        ("stripline-shifted", presets::stripline_loop(10e-3).with_slit_angle(shifted)),
        ("microstrip-shifted", presets::microstrip_loop(10e-3).with_slit_angle(shifted)),
        ("coax", coax_template()),
    ]
    .into_iter()
    .map(|(name, geometry)| {
        (
            name.to_string(),
            LoopDef {
                name: name.to_string(),
                geometry,
                options: ModelOptions::default(),
            },
        )
    })
    .collect()
}

pub fn builtin_feeds() -> BTreeMap<String, FeedDef> {
    let (cross_section, dielectric, conductor) = presets::feed_microstrip();
    BTreeMap::from([
        (
            "microstrip-50".to_string(),
            FeedDef::Explicit {
                gamma: Complex64::new(0.0105, 1.31),
                z0: Complex64::new(50.38, -0.3585),
                length: 0.25,
            },
        ),
        (
            "microstrip-50-line".to_string(),
            FeedDef::Line {
                cross_section,
                dielectric,
                conductor,
                frequency: presets::FEED_FREQUENCY,
                length: 0.25,
            },
        ),
    ])
}

/// Semi-rigid copper coax loop with a PTFE dielectric.
fn coax_template() -> LoopGeometry {
    LoopGeometry {
        loop_radius: presets::LOOP_RADIUS,
        cross_width: 3.0e-3,
        cross_thickness: 3.0e-3,
        slit_angle: PI,
        cross_section: CrossSection::Coax {
            inner_radius: 0.46e-3,
            outer_radius: 1.5e-3,
        },
        dielectric: Dielectric {
            relative_permittivity: 2.1,
            loss_tangent: 0.0002,
        },
        conductor: Conductor::copper(0.3e-3).expect("valid thickness"),
    }
}

fn template(kind: &str) -> Option<LoopGeometry> {
    match kind {
        "stripline" => Some(presets::stripline_loop(10e-3)),
        "microstrip" => Some(presets::microstrip_loop(10e-3)),
        "coax" => Some(coax_template()),
        _ => None,
    }
}

fn kind_name(cs: &CrossSection) -> &'static str {
    match cs {
        CrossSection::Coax { .. } => "coax",
        CrossSection::Stripline { .. } => "stripline",
        CrossSection::Microstrip { .. } => "microstrip",
    }
}

impl ProjectConfig {
    /// Built-in presets only.
    pub fn builtin() -> Self {
        Self {
            loops: builtin_loops(),
            feeds: builtin_feeds(),
            ..Self::default()
        }
    }

    /// Built-ins overlaid with `path`, or just the built-ins when `path` is
    /// absent.
    pub fn load(path: Option<&Path>, tolerance_keys: &[&str]) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::builtin());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text, tolerance_keys)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        if let Some(dir) = &cfg.output_directory {
            if dir.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                cfg.output_directory = Some(base.join(dir));
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str, tolerance_keys: &[&str]) -> CliResult<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::config(format!("syntax error: {e}")))?;
        let mut cfg = Self::builtin();
        let mut seen_loops = Vec::new();
        let mut seen_feeds = Vec::new();
        let mut seen_singletons = Vec::new();
        let mut pending_sweeps = Vec::new();

        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if let Some((key, _)) = props.iter().next() {
                    return Err(CliError::config(format!("{key}: key outside any section")));
                }
                continue;
            };
            check_duplicate_keys(section, props)?;
            match section.split_once('.') {
                Some(("loop", name)) => {
                    check_name(section, name)?;
                    if seen_loops.contains(&name) {
                        return Err(CliError::config(format!("[{section}] is defined twice")));
                    }
                    let def = parse_loop(name, props, &cfg.loops, &seen_loops)?;
                    seen_loops.push(name);
                    cfg.loops.insert(name.to_string(), def);
                }
                Some(("feed", name)) => {
                    check_name(section, name)?;
                    if seen_feeds.contains(&name) {
                        return Err(CliError::config(format!("[{section}] is defined twice")));
                    }
                    let def = parse_feed(name, props, &cfg.feeds, &seen_feeds)?;
                    seen_feeds.push(name);
                    cfg.feeds.insert(name.to_string(), def);
                }
                Some(("sweep", name)) => {
                    check_name(section, name)?;
                    if cfg.sweeps.contains_key(name) {
                        return Err(CliError::config(format!("[{section}] is defined twice")));
                    }
                    let def = parse_sweep(section, props)?;
                    pending_sweeps.push(section.to_string());
                    cfg.sweeps.insert(name.to_string(), def);
                }
                None if section == "output" || section == "tolerance" => {
                    if seen_singletons.contains(&section) {
                        return Err(CliError::config(format!("[{section}] is defined twice")));
                    }
                    seen_singletons.push(section);
                    if section == "output" {
                        let mut keys = Keys::new(section, props);
                        cfg.output_directory = keys.text("directory").map(PathBuf::from);
                        keys.finish()?;
                    } else {
                        for (key, value) in props.iter() {
                            if !tolerance_keys.contains(&key) {
                                return Err(CliError::config(format!(
                                    "tolerance.{key}: unknown tolerance (known: {})",
                                    tolerance_keys.join(", ")
                                )));
                            }
                            let v = number(&format!("tolerance.{key}"), value)?;
                            if !(v > 0.0) || !v.is_finite() {
                                return Err(CliError::config(format!("tolerance.{key}: must be positive")));
                            }
                            cfg.tolerances.insert(key.to_string(), v);
                        }
                    }
                }
                _ => {
                    return Err(CliError::config(format!(
                        "[{section}]: unknown section (expected loop.NAME, feed.NAME, sweep.NAME, output or tolerance)"
                    )))
                }
            }
        }

        for section in pending_sweeps {
            let name = &section["sweep.".len()..];
            let sweep = &cfg.sweeps[name];
            if !cfg.loops.contains_key(&sweep.loop_name) {
                return Err(CliError::config(format!(
                    "{section}.loop: unknown loop '{}' (available: {})",
                    sweep.loop_name,
                    cfg.loop_names().join(", ")
                )));
            }
        }
        Ok(cfg)
    }

    pub fn loop_names(&self) -> Vec<&str> {
        self.loops.keys().map(String::as_str).collect()
    }

    pub fn loop_def(&self, name: &str) -> CliResult<&LoopDef> {
        self.loops.get(name).ok_or_else(|| {
            CliError::config(format!(
                "unknown loop '{name}' (available: {})",
                self.loop_names().join(", ")
            ))
        })
    }

    pub fn feed_def(&self, name: &str) -> CliResult<&FeedDef> {
        self.feeds.get(name).ok_or_else(|| {
            let names: Vec<&str> = self.feeds.keys().map(String::as_str).collect();
            CliError::config(format!("unknown feed '{name}' (available: {})", names.join(", ")))
        })
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

fn check_name(section: &str, name: &str) -> CliResult<()> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
        return Err(CliError::config(format!("[{section}]: invalid name; {NAME_HINT}")));
    }
    Ok(())
}

fn check_duplicate_keys(section: &str, props: &Properties) -> CliResult<()> {
    let mut keys: Vec<&str> = props.iter().map(|(k, _)| k).collect();
    keys.sort_unstable();
    if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::config(format!("{section}.{}: key given twice", w[0])));
    }
    Ok(())
}

fn number(path: &str, text: &str) -> CliResult<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| CliError::config(format!("{path}: expected a number, got '{text}'")))
}

/// Tracks which keys of a section were consumed so leftovers can be
/// reported as unknown.
struct Keys<'a> {
    section: &'a str,
    props: &'a Properties,
    used: Vec<&'a str>,
}

impl<'a> Keys<'a> {
    fn new(section: &'a str, props: &'a Properties) -> Self {
        Self {
            section,
            props,
            used: Vec::new(),
        }
    }

    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.section)
    }

    fn text(&mut self, key: &'a str) -> Option<&'a str> {
        let v = self.props.get(key)?;
        self.used.push(key);
        Some(v.trim())
    }

    fn number(&mut self, key: &'a str) -> CliResult<Option<f64>> {
        match self.text(key) {
            Some(v) => number(&self.path(key), v).map(Some),
            None => Ok(None),
        }
    }

    fn has_any(&self, keys: &[&str]) -> bool {
        keys.iter().any(|k| self.props.contains_key(k))
    }

    fn finish(self) -> CliResult<()> {
        for (key, _) in self.props.iter() {
            if !self.used.contains(&key) {
                return Err(CliError::config(format!("{}.{key}: unknown key", self.section)));
            }
        }
        Ok(())
    }
}

/// Applies the cross-section and material keys shared by loops and feeds.
fn apply_line_keys<'a>(
    keys: &mut Keys<'a>,
    cs: &mut CrossSection,
    dielectric: &mut Dielectric,
    conductor: &mut Conductor,
) -> CliResult<()> {
    let kind = kind_name(cs);
    let mismatch = |keys: &Keys, key: &str| {
        CliError::config(format!("{}: not applicable to a {kind} cross-section", keys.path(key)))
    };
    if let Some(w) = keys.number("strip_width")? {
        match cs {
            CrossSection::Stripline { width, .. } | CrossSection::Microstrip { width, .. } => *width = w,
            CrossSection::Coax { .. } => return Err(mismatch(keys, "strip_width")),
        }
    }
    if let Some(t) = keys.number("strip_thickness")? {
        match cs {
            CrossSection::Stripline { thickness, .. } | CrossSection::Microstrip { thickness, .. } => {
                *thickness = t;
                conductor.thickness = t;
            }
            CrossSection::Coax { .. } => return Err(mismatch(keys, "strip_thickness")),
        }
    }
    if let Some(s) = keys.number("ground_spacing")? {
        match cs {
            CrossSection::Stripline { ground_spacing, .. } => *ground_spacing = s,
            _ => return Err(mismatch(keys, "ground_spacing")),
        }
    }
    if let Some(h) = keys.number("height")? {
        match cs {
            CrossSection::Microstrip { height, .. } => *height = h,
            _ => return Err(mismatch(keys, "height")),
        }
    }
    for key in ["inner_radius", "outer_radius"] {
        if let Some(r) = keys.number(key)? {
            match cs {
                CrossSection::Coax {
                    inner_radius,
                    outer_radius,
                } => *(if key == "inner_radius" { inner_radius } else { outer_radius }) = r,
                _ => return Err(mismatch(keys, key)),
            }
        }
    }
    if let Some(v) = keys.number("eps_r")? {
        dielectric.relative_permittivity = v;
    }
    if let Some(v) = keys.number("tan_delta")? {
        dielectric.loss_tangent = v;
    }
    if let Some(v) = keys.number("conductivity")? {
        conductor.conductivity = v;
    }
    let section = keys.section;
    Dielectric::new(dielectric.relative_permittivity, dielectric.loss_tangent)
        .map_err(|e| CliError::config(format!("{section}: {e}")))?;
    Conductor::with_permeability(conductor.conductivity, conductor.thickness, conductor.permeability)
        .map_err(|e| CliError::config(format!("{section}: {e}")))?;
    cs.validate().map_err(|e| CliError::config(format!("{section}: {e}")))
}

fn parse_loop(
    name: &str,
    props: &Properties,
    known: &BTreeMap<String, LoopDef>,
    configured: &[&str],
) -> CliResult<LoopDef> {
    let section = format!("loop.{name}");
    let mut keys = Keys::new(&section, props);
    let base = keys.text("base");
    let kind = keys.text("type");

    let (mut g, mut options) = match (base, kind) {
        (Some(base), kind) => {
            // A loop may refine the built-in it shadows, or any loop defined
            // earlier in the file.
            let resolved = if base == name {
                builtin_loops().remove(name)
            } else if configured.contains(&base) || builtin_loops().contains_key(base) {
                known.get(base).cloned()
            } else {
                None
            };
            let def = resolved.ok_or_else(|| {
                CliError::config(format!(
                    "{}: unknown loop '{base}' (built-ins or loops defined earlier in the file)",
                    keys.path("base")
                ))
            })?;
            if let Some(kind) = kind {
                if kind != kind_name(&def.geometry.cross_section) {
                    return Err(CliError::config(format!(
                        "{}: '{kind}' conflicts with base '{base}'",
                        keys.path("type")
                    )));
                }
            }
            (def.geometry, def.options)
        }
        (None, Some(kind)) => {
            let g = template(kind).ok_or_else(|| {
                CliError::config(format!(
                    "{}: unknown type '{kind}' (expected stripline, microstrip or coax)",
                    keys.path("type")
                ))
            })?;
            (g, ModelOptions::default())
        }
        (None, None) => {
            return Err(CliError::config(format!("[{section}]: needs a 'type' or a 'base'")));
        }
    };

    if let Some(v) = keys.number("loop_radius")? {
        g.loop_radius = v;
    }
    if let Some(v) = keys.number("cross_width")? {
        g.cross_width = v;
    }
    if let Some(v) = keys.number("cross_thickness")? {
        g.cross_thickness = v;
    }
    match (keys.number("slit_angle")?, keys.number("slit_angle_deg")?) {
        (Some(_), Some(_)) => {
            return Err(CliError::config(format!(
                "[{section}]: give either slit_angle or slit_angle_deg"
            )))
        }
        (Some(v), None) => g.slit_angle = v,
        (None, Some(v)) => g.slit_angle = v.to_radians(),
        (None, None) => {}
    }
    apply_line_keys(&mut keys, &mut g.cross_section, &mut g.dielectric, &mut g.conductor)?;

    if let Some(v) = keys.text("loop_loss") {
        options.loop_loss = match v {
            "circumference" => LoopLossForm::Circumference,
            "radius" => LoopLossForm::Radius,
            _ => {
                return Err(CliError::config(format!(
                    "{}: expected circumference or radius, got '{v}'",
                    keys.path("loop_loss")
                )))
            }
        };
    }
    if let Some(v) = keys.text("capacitance") {
        options.capacitance = match v {
            "lumped" => CapacitanceModel::Lumped,
            "open-stub" => CapacitanceModel::OpenStub,
            _ => {
                return Err(CliError::config(format!(
                    "{}: expected lumped or open-stub, got '{v}'",
                    keys.path("capacitance")
                )))
            }
        };
    }
    if let Some(f) = keys.number("evaluation_hz")? {
        options.evaluation = Evaluation::Fixed(positive(&keys.path("evaluation_hz"), f)?);
    }
    if let Some(f) = keys.number("start_frequency")? {
        options.start_frequency = positive(&keys.path("start_frequency"), f)?;
    }
    if let Some(v) = keys.number("convergence_tolerance")? {
        options.tolerance = positive(&keys.path("convergence_tolerance"), v)?;
    }
    if let Some(v) = keys.text("max_iterations") {
        options.max_iterations = v
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| {
                CliError::config(format!("{}: expected a positive integer", keys.path("max_iterations")))
            })?;
    }
    keys.finish()?;
    g.validate().map_err(|e| CliError::config(format!("{section}: {e}")))?;
    Ok(LoopDef {
        name: name.to_string(),
        geometry: g,
        options,
    })
}

fn positive(path: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(format!("{path}: must be positive")))
    }
}

const EXPLICIT_FEED_KEYS: [&str; 4] = ["alpha", "beta", "z0_re", "z0_im"];
const LINE_FEED_KEYS: [&str; 11] = [
    "type",
    "frequency",
    "strip_width",
    "strip_thickness",
    "ground_spacing",
    "height",
    "inner_radius",
    "outer_radius",
    "eps_r",
    "tan_delta",
    "conductivity",
];

fn parse_feed(
    name: &str,
    props: &Properties,
    known: &BTreeMap<String, FeedDef>,
    configured: &[&str],
) -> CliResult<FeedDef> {
    let section = format!("feed.{name}");
    let mut keys = Keys::new(&section, props);
    let explicit = keys.has_any(&EXPLICIT_FEED_KEYS);
    let line = keys.has_any(&LINE_FEED_KEYS);
    if explicit && line {
        return Err(CliError::config(format!(
            "[{section}]: mix of line constants ({}) and line geometry keys",
            EXPLICIT_FEED_KEYS.join(", ")
        )));
    }
    let base = match keys.text("base") {
        Some(base) => {
            let resolved = if base == name {
                builtin_feeds().remove(name)
            } else if configured.contains(&base) || builtin_feeds().contains_key(base) {
                known.get(base).copied()
            } else {
                None
            };
            Some(resolved.ok_or_else(|| {
                CliError::config(format!(
                    "{}: unknown feed '{base}' (built-ins or feeds defined earlier in the file)",
                    keys.path("base")
                ))
            })?)
        }
        None => None,
    };

    let def = match base {
        Some(FeedDef::Explicit { gamma, z0, length }) if !line => FeedDef::Explicit {
            gamma: Complex64::new(
                keys.number("alpha")?.unwrap_or(gamma.re),
                keys.number("beta")?.unwrap_or(gamma.im),
            ),
            z0: Complex64::new(
                keys.number("z0_re")?.unwrap_or(z0.re),
                keys.number("z0_im")?.unwrap_or(z0.im),
            ),
            length,
        },
        None if explicit => {
            let mut get = |key: &'static str| -> CliResult<f64> {
                let path = keys.path(key);
                keys.number(key)?
                    .ok_or_else(|| CliError::config(format!("{path}: required for a feed given by line constants")))
            };
            FeedDef::Explicit {
                gamma: Complex64::new(get("alpha")?, get("beta")?),
                z0: Complex64::new(get("z0_re")?, get("z0_im")?),
                length: 0.0,
            }
        }
        Some(FeedDef::Line {
            mut cross_section,
            mut dielectric,
            mut conductor,
            frequency,
            length,
        }) if !explicit => {
            if let Some(kind) = keys.text("type") {
                if kind != kind_name(&cross_section) {
                    return Err(CliError::config(format!(
                        "{}: '{kind}' conflicts with the base feed",
                        keys.path("type")
                    )));
                }
            }
            apply_line_keys(&mut keys, &mut cross_section, &mut dielectric, &mut conductor)?;
            FeedDef::Line {
                cross_section,
                dielectric,
                conductor,
                frequency: match keys.number("frequency")? {
                    Some(f) => positive(&keys.path("frequency"), f)?,
                    None => frequency,
                },
                length,
            }
        }
        None => {
            let kind = keys.text("type").ok_or_else(|| {
                CliError::config(format!(
                    "[{section}]: needs a 'base', a 'type' with line geometry, or alpha/beta/z0_re/z0_im"
                ))
            })?;
            let (mut cross_section, mut dielectric, mut conductor) = match kind {
                "microstrip" => presets::feed_microstrip(),
                "stripline" | "coax" => {
                    let g = template(kind).expect("known template");
                    (g.cross_section, g.dielectric, g.conductor)
                }
                _ => {
                    return Err(CliError::config(format!(
                        "{}: unknown type '{kind}' (expected stripline, microstrip or coax)",
                        keys.path("type")
                    )))
                }
            };
            apply_line_keys(&mut keys, &mut cross_section, &mut dielectric, &mut conductor)?;
            let path = keys.path("frequency");
            let frequency = keys
                .number("frequency")?
                .ok_or_else(|| CliError::config(format!("{path}: required for a feed given by geometry")))?;
            FeedDef::Line {
                cross_section,
                dielectric,
                conductor,
                frequency: positive(&path, frequency)?,
                length: 0.0,
            }
        }
        Some(_) => {
            return Err(CliError::config(format!(
                "[{section}]: keys do not match the kind of base feed"
            )))
        }
    };

    let length = match keys.number("length")? {
        Some(l) => positive(&keys.path("length"), l)?,
        None => match base {
            Some(b) => b.length(),
            None => return Err(CliError::config(format!("{}: required", keys.path("length")))),
        },
    };
    keys.finish()?;
    let def = def.with_length(length);
    def.spec().map_err(|e| CliError::config(format!("{section}: {e}")))?;
    Ok(def)
}

fn parse_sweep(section: &str, props: &Properties) -> CliResult<SweepDef> {
    let mut keys = Keys::new(section, props);
    let require = |keys: &Keys, key: &str| CliError::config(format!("{}: required", keys.path(key)));
    let loop_name = keys.text("loop").ok_or_else(|| require(&keys, "loop"))?.to_string();
    let parameter = match keys.text("parameter").unwrap_or("strip_width") {
        "strip_width" => SweepParameter::StripWidth,
        "slit_angle" => SweepParameter::SlitAngle,
        other => {
            return Err(CliError::config(format!(
                "{}: expected strip_width or slit_angle, got '{other}'",
                keys.path("parameter")
            )))
        }
    };
    let start = keys.number("start")?.ok_or_else(|| require(&keys, "start"))?;
    let steps = match keys.text("steps") {
        Some(s) => s
            .parse::<usize>()
            .map_err(|_| CliError::config(format!("{}: expected a positive integer", keys.path("steps"))))?,
        None => return Err(require(&keys, "steps")),
    };
    if steps == 0 {
        return Err(CliError::config(format!("{}: must be at least 1", keys.path("steps"))));
    }
    let stop = match keys.number("stop")? {
        Some(v) => v,
        None if steps == 1 => start,
        None => return Err(require(&keys, "stop")),
    };
    keys.finish()?;
    let def = SweepDef {
        loop_name,
        parameter,
        start,
        stop,
        steps,
    };
    def.check(section)?;
    Ok(def)
}
