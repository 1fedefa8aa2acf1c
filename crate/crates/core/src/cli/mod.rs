//! Command-line front end.
//!
//! Every command produces a [`Table`], which is written as CSV or JSON and
//! optionally drawn as an SVG chart.

mod args;
pub mod svg;
pub mod table;

use std::io::Write;

use rayon::prelude::*;
use thiserror::Error;

pub use args::{config_path, parse_config, Format, RunConfig, Task};
use svg::{LineChart, Series};
pub use table::{format_number, Cell, Table};

use crate::angular::eval_angular_wavefunction;
use crate::error::WkbError;
use crate::oracle::{shooting_eigenvalue, ShootingConfig};
use crate::potentials::{PhysicsContext, Potential};
use crate::radial::{self, CentrifugalMode};

pub const SPECTRUM_COLUMNS: [&str; 8] = [
    "n_r",
    "l",
    "E_wkb",
    "E_analytic",
    "E_oracle",
    "rel_err_analytic",
    "rel_err_oracle",
    "action_residual",
];

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version` output; not a failure.
    #[error("{0}")]
    Help(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("solver failure: {0}")]
    Solver(#[from] WkbError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 1,
        }
    }
}

fn rel_err(value: f64, reference: Option<f64>) -> Option<f64> {
    reference.map(|r| ((value - r) / r).abs())
}

fn grid_table(
    potential: &Potential,
    ctx: &PhysicsContext,
    nr_max: u32,
    l_max: u32,
    mode: CentrifugalMode,
    with_references: bool,
) -> Result<Table, CliError> {
    let spectrum = radial::spectrum(potential, ctx, nr_max, l_max, mode)?;
    let oracle: Vec<Option<f64>> = if with_references {
        spectrum
            .entries
            .par_iter()
            .map(|e| {
                let cfg = ShootingConfig::for_state(potential, ctx, e.n_r, e.l)?;
                shooting_eigenvalue(potential, ctx, e.n_r, e.l, &cfg).map(Some)
            })
            .collect::<crate::Result<_>>()?
    } else {
        vec![None; spectrum.entries.len()]
    };

    let mut rows: Vec<((u32, u32), Vec<Cell>)> = Vec::new();
    for (e, oracle) in spectrum.entries.iter().zip(oracle) {
        let analytic = if with_references {
            e.energy_analytic
        } else {
            None
        };
        rows.push((
            (e.l, e.n_r),
            vec![
                Cell::Int(e.n_r.into()),
                Cell::Int(e.l.into()),
                Cell::Num(e.energy_wkb),
                Cell::opt(analytic),
                Cell::opt(oracle),
                Cell::opt(rel_err(e.energy_wkb, analytic)),
                Cell::opt(rel_err(e.energy_wkb, oracle)),
                Cell::Num(e.action_residual),
            ],
        ));
    }
    let mut table = Table::new(&SPECTRUM_COLUMNS);
    for o in &spectrum.omitted {
        let mut row = vec![Cell::Int(o.n_r.into()), Cell::Int(o.l.into())];
        row.resize(SPECTRUM_COLUMNS.len(), Cell::Empty);
        rows.push(((o.l, o.n_r), row));
        table
            .warnings
            .push(format!("n_r = {}, l = {}: {}", o.n_r, o.l, o.reason));
    }
    rows.sort_by_key(|r| r.0);
    for (_, row) in rows {
        table.push(row);
    }
    Ok(table)
}

fn angular_table(l: u32, m: i32, samples: usize, phi: f64) -> Result<Table, CliError> {
    let mut table = Table::new(&["theta", "re", "im"]);
    for i in 0..samples {
        let theta = if i + 1 == samples {
            std::f64::consts::PI
        } else {
            std::f64::consts::PI * (i as f64 / (samples - 1) as f64)
        };
        let v = eval_angular_wavefunction(l, m, theta, phi)?;
        table.push(vec![
            Cell::Num(theta),
            Cell::Num(v.value.re),
            Cell::Num(v.value.im),
        ]);
    }
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
fn scan_table(
    potential: &Potential,
    ctx: &PhysicsContext,
    l: u32,
    mode: CentrifugalMode,
    e_min: Option<f64>,
    e_max: Option<f64>,
    points: usize,
) -> Result<Table, CliError> {
    let big_m = mode.angular_momentum(l, ctx);
    let window = potential.bound_energy_window(ctx, big_m);
    let scale = potential.energy_scale(ctx);
    let lo = e_min.unwrap_or(if window.lower.is_finite() {
        window.lower
    } else {
        -10.0 * scale
    });
    let hi = e_max.unwrap_or(match potential.threshold() {
        Some(t) => t - 1e-3 * (t - lo),
        None => lo + 10.0 * scale,
    });
    if lo >= hi {
        return Err(CliError::Usage(format!("empty energy range [{lo}, {hi}]")));
    }

    let energies: Vec<f64> = (0..points)
        .map(|i| lo + (hi - lo) * (i as f64 / (points - 1) as f64))
        .collect();
    let actions: Vec<crate::Result<Option<f64>>> = energies
        .par_iter()
        .map(|&e| match radial::radial_action(potential, ctx, e, big_m) {
            Ok(r) => Ok(Some(r.value)),
            Err(WkbError::NoBoundRegion { .. }) => Ok(Some(0.0)),
            Err(WkbError::Scattering { .. }) => Ok(None),
            Err(err) => Err(err),
        })
        .collect();

    let mut table = Table::new(&["E", "action"]);
    for (e, a) in energies.into_iter().zip(actions) {
        match a? {
            Some(v) => table.push(vec![Cell::Num(e), Cell::Num(v)]),
            None => table.warnings.push(format!(
                "E = {}: above threshold, skipped",
                format_number(e)
            )),
        }
    }
    Ok(table)
}

/// Executes a validated configuration and builds its output table.
pub fn execute(config: &RunConfig) -> Result<Table, CliError> {
    let ctx = &config.ctx;
    match config.task {
        Task::Spectrum {
            ref potential,
            nr_max,
            l_max,
            mode,
        } => grid_table(potential, ctx, nr_max, l_max, mode, false),
        Task::Compare {
            ref potential,
            nr_max,
            l_max,
            mode,
        } => grid_table(potential, ctx, nr_max, l_max, mode, true),
        Task::Angular { l, m, samples, phi } => angular_table(l, m, samples, phi),
        Task::ActionScan {
            ref potential,
            l,
            mode,
            e_min,
            e_max,
            points,
        } => scan_table(potential, ctx, l, mode, e_min, e_max, points),
    }
}

/// Chart of a command's table.
pub fn chart(config: &RunConfig, table: &Table) -> LineChart {
    let series_of = |x: &str, y: &str, name: &str| Series {
        name: name.to_string(),
        points: table
            .column(x)
            .into_iter()
            .zip(table.column(y))
            .filter_map(|(a, b)| Some((a?, b?)))
            .collect(),
    };
    match &config.task {
        Task::Spectrum { potential, .. } | Task::Compare { potential, .. } => {
            let ls = table.column("l");
            let mut distinct: Vec<u32> = ls.iter().flatten().map(|&l| l as u32).collect();
            distinct.dedup();
            let series = distinct
                .into_iter()
                .map(|l| {
                    let pts = table
                        .column("n_r")
                        .into_iter()
                        .zip(table.column("E_wkb"))
                        .zip(&ls)
                        .filter(|(_, row_l)| **row_l == Some(l as f64))
                        .filter_map(|((n, e), _)| Some((n?, e?)))
                        .collect();
                    Series {
                        name: format!("l = {l}"),
                        points: pts,
                    }
                })
                .collect();
            LineChart {
                title: format!("WKB spectrum, {}", potential.name()),
                x_label: "n_r".into(),
                y_label: "E".into(),
                series,
            }
        }
        Task::Angular { l, m, .. } => LineChart {
            title: format!("angular function, l = {l}, m = {m}"),
            x_label: "theta".into(),
            y_label: "Y".into(),
            series: vec![
                series_of("theta", "re", "Re"),
                series_of("theta", "im", "Im"),
            ],
        },
        Task::ActionScan { potential, l, .. } => LineChart {
            title: format!("radial action, {}, l = {l}", potential.name()),
            x_label: "E".into(),
            y_label: "I(E)".into(),
            series: vec![series_of("E", "action", "I(E)")],
        },
    }
}

/// Runs `config`, writing the table to `out`. Warnings are returned for
/// the caller to report.
pub fn run<W: Write>(config: &RunConfig, out: &mut W) -> Result<Vec<String>, CliError> {
    let table = execute(config)?;
    let text = match config.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let echo = serde_json::to_value(config).expect("serializable config");
            table.to_json(echo)
        }
    };
    out.write_all(text.as_bytes())?;
    if let Some(path) = &config.plot {
        std::fs::write(path, chart(config, &table).render())?;
    }
    Ok(table.warnings)
}

/// Full program: reads the config file named by `--config`, parses, runs,
/// and returns the process exit code.
pub fn main_with_args(argv: Vec<String>) -> u8 {
    let text = match config_path(&argv) {
        Some(path) => match std::fs::read_to_string(&path) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("usage error: --config {}: {e}", path.display());
                return 2;
            }
        },
        None => None,
    };
    let config = match parse_config(&argv, text.as_deref()) {
        Ok(c) => c,
        Err(CliError::Help(h)) => {
            print!("{h}");
            return 0;
        }
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&config, &mut lock) {
        Ok(warnings) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
