//! Command-line flags, config-file merging and validation.

use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::CliError;
use crate::potentials::{PhysicsContext, Potential};
use crate::radial::CentrifugalMode;

#[derive(Debug, Parser)]
#[command(
    name = "wkb",
    version,
    about = "WKB spectra of spherically symmetric potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Solve the WKB spectrum over a grid of (n_r, l).
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Spectrum(GridArgs),
    /// WKB spectrum alongside closed-form and shooting-method energies.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Compare(GridArgs),
    /// Sample the quasiclassical angular eigenfunction on [0, π].
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Angular(AngularArgs),
    /// Tabulate the radial action I(E) over an energy range.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    ActionScan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Oscillator,
    Coulomb,
    Hulthen,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Oscillator => "oscillator",
            Kind::Coulomb => "coulomb",
            Kind::Hulthen => "hulthen",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Langer,
    Naive,
}

impl From<Mode> for CentrifugalMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Langer => CentrifugalMode::Langer,
            Mode::Naive => CentrifugalMode::Naive,
        }
    }
}

#[derive(Debug, Args)]
struct PotentialArgs {
    /// Potential family.
    #[arg(long, value_enum)]
    potential: Option<Kind>,
    /// Oscillator frequency [default: 1].
    #[arg(long)]
    omega: Option<f64>,
    /// Coulomb strength [default: 1].
    #[arg(long)]
    alpha: Option<f64>,
    /// Hulthén depth.
    #[arg(long)]
    v0: Option<f64>,
    /// Hulthén screening length.
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Also write an SVG line chart of the table to this path.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    /// Largest radial quantum number.
    #[arg(long, default_value_t = 3)]
    nr_max: u32,
    /// Largest orbital quantum number.
    #[arg(long, default_value_t = 3)]
    l_max: u32,
    #[arg(long, value_enum, default_value = "langer")]
    mode: Mode,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct AngularArgs {
    #[arg(long, default_value_t = 0)]
    l: u32,
    #[arg(long, default_value_t = 0)]
    m: i32,
    /// Number of equally spaced θ samples, endpoints included.
    #[arg(long, default_value_t = 101)]
    samples: usize,
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long, default_value_t = 0)]
    l: u32,
    #[arg(long, value_enum, default_value = "langer")]
    mode: Mode,
    /// Lowest energy [default: well bottom].
    #[arg(long)]
    e_min: Option<f64>,
    /// Highest energy [default: just below threshold, or ten energy units up].
    #[arg(long)]
    e_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

/// Validated run description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub task: Task,
    pub ctx: PhysicsContext,
    pub format: Format,
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Task {
    Spectrum {
        potential: Potential,
        nr_max: u32,
        l_max: u32,
        mode: CentrifugalMode,
    },
    Compare {
        potential: Potential,
        nr_max: u32,
        l_max: u32,
        mode: CentrifugalMode,
    },
    Angular {
        l: u32,
        m: i32,
        samples: usize,
        phi: f64,
    },
    ActionScan {
        potential: Potential,
        l: u32,
        mode: CentrifugalMode,
        e_min: Option<f64>,
        e_max: Option<f64>,
        points: usize,
    },
}

fn usage(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("--{key}: {msg}"))
}

fn finite(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(key, format!("must be finite, got {v}")))
    }
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(usage(key, format!("must be positive, got {v}")))
    }
}

impl PotentialArgs {
    fn build(&self) -> Result<(Potential, PhysicsContext), CliError> {
        let ctx = PhysicsContext {
            hbar: positive("hbar", self.hbar)?,
            mass: positive("mass", self.mass)?,
        };
        let kind = self
            .potential
            .ok_or_else(|| CliError::Usage("--potential is required".into()))?;
        let stray = |key: &str, v: Option<f64>| match v {
            Some(_) => Err(usage(
                key,
                format!("does not apply to the {} potential", kind.name()),
            )),
            None => Ok(()),
        };
        let potential = match kind {
            Kind::Oscillator => {
                stray("alpha", self.alpha)?;
                stray("v0", self.v0)?;
                stray("r0", self.r0)?;
                Potential::Oscillator {
                    omega: positive("omega", self.omega.unwrap_or(1.0))?,
                }
            }
            Kind::Coulomb => {
                stray("omega", self.omega)?;
                stray("v0", self.v0)?;
                stray("r0", self.r0)?;
                Potential::Coulomb {
                    alpha: positive("alpha", self.alpha.unwrap_or(1.0))?,
                }
            }
            Kind::Hulthen => {
                stray("omega", self.omega)?;
                stray("alpha", self.alpha)?;
                let v0 = self
                    .v0
                    .ok_or_else(|| usage("v0", "required for the hulthen potential"))?;
                let r0 = self
                    .r0
                    .ok_or_else(|| usage("r0", "required for the hulthen potential"))?;
                Potential::Hulthen {
                    v0: positive("v0", v0)?,
                    r0: positive("r0", r0)?,
                }
            }
        };
        Ok((potential, ctx))
    }
}

impl Sub {
    fn output(&self) -> &OutputArgs {
        match self {
            Sub::Spectrum(a) | Sub::Compare(a) => &a.output,
            Sub::Angular(a) => &a.output,
            Sub::ActionScan(a) => &a.output,
        }
    }

    fn into_config(self) -> Result<RunConfig, CliError> {
        let (format, plot) = (self.output().format, self.output().plot.clone());
        let (task, ctx) = match self {
            Sub::Spectrum(a) => {
                let (potential, ctx) = a.potential.build()?;
                let task = Task::Spectrum {
                    potential,
                    nr_max: a.nr_max,
                    l_max: a.l_max,
                    mode: a.mode.into(),
                };
                (task, ctx)
            }
            Sub::Compare(a) => {
                let (potential, ctx) = a.potential.build()?;
                let task = Task::Compare {
                    potential,
                    nr_max: a.nr_max,
                    l_max: a.l_max,
                    mode: a.mode.into(),
                };
                (task, ctx)
            }
            Sub::Angular(a) => {
                if a.m.unsigned_abs() > a.l {
                    return Err(usage(
                        "m",
                        format!("need l >= |m|, got l = {}, m = {}", a.l, a.m),
                    ));
                }
                if a.samples < 2 {
                    return Err(usage(
                        "samples",
                        format!("need at least 2, got {}", a.samples),
                    ));
                }
                let task = Task::Angular {
                    l: a.l,
                    m: a.m,
                    samples: a.samples,
                    phi: finite("phi", a.phi)?,
                };
                (task, PhysicsContext::default())
            }
            Sub::ActionScan(a) => {
                let (potential, ctx) = a.potential.build()?;
                let e_min = a.e_min.map(|v| finite("e-min", v)).transpose()?;
                let e_max = a.e_max.map(|v| finite("e-max", v)).transpose()?;
                if let (Some(lo), Some(hi)) = (e_min, e_max) {
                    if lo >= hi {
                        return Err(usage(
                            "e-max",
                            format!("must exceed --e-min ({lo}), got {hi}"),
                        ));
                    }
                }
                if a.points < 2 {
                    return Err(usage(
                        "points",
                        format!("need at least 2, got {}", a.points),
                    ));
                }
                let task = Task::ActionScan {
                    potential,
                    l: a.l,
                    mode: a.mode.into(),
                    e_min,
                    e_max,
                    points: a.points,
                };
                (task, ctx)
            }
        };
        Ok(RunConfig {
            task,
            ctx,
            format,
            plot,
        })
    }
}

/// Value of `--config` in `argv`, if present.
pub fn config_path(argv: &[String]) -> Option<PathBuf> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// keys may use `_` or `-`.
fn parse_config_text(text: &str) -> Result<Vec<(String, String, usize)>, CliError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "config line {}: expected `key = value`, got `{}`",
                i + 1,
                raw.trim()
            ))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Usage(format!(
                "config line {}: empty key or value",
                i + 1
            )));
        }
        pairs.push((key, value, i + 1));
    }
    Ok(pairs)
}

/// Builds a [`RunConfig`] from command-line arguments (including the
/// program name) and optional config-file contents.
pub fn parse_config(argv: &[String], config_text: Option<&str>) -> Result<RunConfig, CliError> {
    let mut args: Vec<String> = argv.to_vec();
    if let Some(text) = config_text {
        let sub_pos = args
            .iter()
            .skip(1)
            .position(|a| !a.starts_with('-'))
            .map(|p| p + 1);
        if let Some(pos) = sub_pos {
            let cmd = Cli::command();
            let sub = cmd
                .find_subcommand(&args[pos])
                .ok_or_else(|| CliError::Usage(format!("unknown command `{}`", args[pos])))?;
            let known: Vec<&str> = sub
                .get_arguments()
                .filter_map(|a| a.get_long())
                .filter(|l| !matches!(*l, "config" | "help"))
                .collect();
            let mut injected = Vec::new();
            for (key, value, line) in parse_config_text(text)? {
                if !known.contains(&key.as_str()) {
                    return Err(CliError::Usage(format!(
                        "config line {line}: unknown key `{key}`"
                    )));
                }
                injected.push(format!("--{key}"));
                injected.push(value);
            }
            args.splice(pos + 1..pos + 1, injected);
        }
    }

    let cli = Cli::try_parse_from(&args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Help(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    })?;
    cli.command.into_config()
}
