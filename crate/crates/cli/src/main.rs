mod commands;
mod config;
mod error;
mod fixtures;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::couple::{MatchMode, Spacing};
use commands::{couple, design, extract, feedline, sweep, validate, Context};
use config::{ProjectConfig, SweepParameter};
use error::{CliError, CliResult};
use output::{Format, Sink};

/// Circuit models for shielded-loop resonators.
#[derive(Debug, Parser)]
#[command(name = "loopkit", version)]
struct Cli {
    /// INI project file with loop, feed and sweep definitions.
    #[arg(long, global = true, env = "LOOPKIT_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,

    /// Also write each result table as <DIR>/<command>-<name>.csv.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// What to print on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Report)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Equivalent R, L, C and loss breakdown of one loop.
    Design {
        /// Loop name (built-in or from the config).
        #[arg(name = "LOOP")]
        loop_name: String,
    },
    /// Design a loop over a range of strip widths or slit angles.
    Sweep {
        /// Sweep name from the config, or a loop name.
        target: String,
        #[arg(long, value_enum)]
        param: Option<SweepParameter>,
        /// First value (m or rad).
        #[arg(long, allow_negative_numbers = true)]
        start: Option<f64>,
        /// Last value (m or rad).
        #[arg(long, allow_negative_numbers = true)]
        stop: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Extract R, L, C and Q from a Touchstone file.
    Extract {
        file: PathBuf,
        /// Characteristic impedance of the feed to remove (Ω).
        #[arg(long, default_value_t = 50.0)]
        z0_feed: f64,
        /// One-way electrical length of the feed at --f-ref (degrees).
        #[arg(long, default_value_t = 0.0)]
        theta_deg: f64,
        /// Frequency at which --theta-deg applies (Hz).
        #[arg(long)]
        f_ref: Option<f64>,
        /// Port whose reflection is used, counting from 1.
        #[arg(long, default_value_t = 1)]
        port: usize,
        /// Relative offset of the two L/C fit frequencies from f0.
        #[arg(long, default_value_t = loopkit::extraction::DEFAULT_FIT_OFFSET)]
        fit_offset: f64,
    },
    /// Power-transfer efficiency of two coaxial loops over frequency.
    Couple(CoupleArgs),
    /// Feedline effective resistance over a grid of load reactance.
    Feedline {
        /// Feed name (built-in or from the config).
        feed: String,
        /// Override the feed length (m).
        #[arg(long)]
        length: Option<f64>,
        #[arg(long, default_value_t = -200.0, allow_negative_numbers = true)]
        x_start: f64,
        #[arg(long, default_value_t = 200.0, allow_negative_numbers = true)]
        x_stop: f64,
        #[arg(long, default_value_t = 1.0)]
        x_step: f64,
    },
    /// Recompute the published model rows and trends; exit 3 on any failure.
    Validate,
}

#[derive(Debug, Args)]
struct CoupleArgs {
    /// First loop.
    loop1: String,
    /// Second loop (defaults to the first).
    loop2: Option<String>,
    /// Axial separation (m).
    #[arg(long, required_unless_present = "mutual", conflicts_with = "mutual")]
    distance: Option<f64>,
    /// Mutual inductance (H) instead of a distance.
    #[arg(long)]
    mutual: Option<f64>,
    #[arg(long = "match", value_enum, default_value_t = MatchMode::Optimal)]
    mode: MatchMode,
    /// L-match design frequency (Hz); defaults to the loop resonance.
    #[arg(long)]
    f_match: Option<f64>,
    /// Source and load resistance behind the L-match (Ω).
    #[arg(long, default_value_t = loopkit::coupling::DEFAULT_SOURCE_RESISTANCE)]
    source_resistance: f64,
    /// Grid start (Hz); defaults to half the centre frequency.
    #[arg(long)]
    start: Option<f64>,
    /// Grid stop (Hz); defaults to 1.5 times the centre frequency.
    #[arg(long)]
    stop: Option<f64>,
    /// Grid step (Hz).
    #[arg(long)]
    step: Option<f64>,
    /// Include the loss of each loop's own feedline.
    #[arg(long)]
    with_feed: bool,
}

fn run(cli: Cli) -> CliResult<()> {
    let tolerance_keys = validate::tolerance_keys();
    let config = ProjectConfig::load(cli.config.as_deref(), &tolerance_keys)?;
    let sink = Sink {
        format: cli.format,
        directory: cli.out.or_else(|| config.output_directory.clone()),
    };
    let ctx = Context { config, sink };
    match cli.command {
        Command::Design { loop_name } => design::run(&ctx, &loop_name),
        Command::Sweep {
            target,
            param,
            start,
            stop,
            steps,
        } => sweep::run(
            &ctx,
            &target,
            sweep::Overrides {
                parameter: param,
                start,
                stop,
                steps,
            },
        ),
        Command::Extract {
            file,
            z0_feed,
            theta_deg,
            f_ref,
            port,
            fit_offset,
        } => extract::run(
            &ctx,
            &file,
            extract::Options {
                z0_feed,
                theta_deg,
                f_ref,
                port,
                fit_offset,
            },
        ),
        Command::Couple(a) => {
            let spacing = match (a.distance, a.mutual) {
                (Some(d), _) => Spacing::Distance(d),
                (None, Some(m)) => Spacing::Mutual(m),
                (None, None) => return Err(CliError::config("give --distance or --mutual")),
            };
            couple::run(
                &ctx,
                &a.loop1,
                a.loop2.as_deref(),
                couple::Options {
                    spacing,
                    mode: a.mode,
                    f_match: a.f_match,
                    source_resistance: a.source_resistance,
                    start: a.start,
                    stop: a.stop,
                    step: a.step,
                    with_feed: a.with_feed,
                },
            )
        }
        Command::Feedline {
            feed,
            length,
            x_start,
            x_stop,
            x_step,
        } => feedline::run(
            &ctx,
            &feed,
            feedline::Options {
                length,
                x_start,
                x_stop,
                x_step,
            },
        ),
        Command::Validate => validate::run(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("loopkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
