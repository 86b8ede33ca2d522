//! Command-line front end.
//!
//! Every command resolves a [`SweepConfig`] from built-in defaults, an
//! optional JSON file and the command-line flags (flags win), then writes
//! CSV or JSON to `--out` (stdout when absent) and optionally an SVG chart.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::entropy::EntropicOrder;
use crate::error::{Error, Result};
use crate::inefficiency::{report_from_joints_inefficient, Efficiency};
use crate::lg::{self, report_from_joints, ThetaGrid, DEFAULT_EPSILON, DEFAULT_THETA_POINTS};
use crate::oracle::{fuzz_classical_bound, FuzzConfig};
use crate::plot::{LineChart, Series};
use crate::quantum::protocol_joints;
use crate::systems::{make_protocol, SystemFamily, SystemKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

pub const PLOT_ALPHAS: [f64; 5] = [1.0, 1.5, 2.0, 2.5, 3.0];
pub const DEFAULT_ETAS: [f64; 5] = [0.95, 0.96, 0.97, 0.98, 0.99];
pub const DEFAULT_THETA_OVER_PI: f64 = 0.15;
const EXTENSION_RANGE: (f64, f64, f64) = (1.0, 4.0, 0.01);
const ORACLE_ALPHAS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 5.0];

#[derive(Debug, Parser)]
#[command(
    name = "entropic-lg",
    version,
    about = "Entropic Leggett-Garg tests for two-point-measurement work statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// C_alpha and the four entropies on a theta grid for each alpha.
    Sweep,
    /// Growth of the violation domain when alpha ranges over a grid.
    Extension,
    /// Inefficiency ratio r_alpha(eta) versus alpha at a fixed angle.
    Ratio,
    /// Fuzz random hidden-variable models against the classical bound.
    Oracle,
    /// Closed-form versus distorted-table audit of the lossy-detector quantity.
    Inefficiency,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// qubit or qutrit
    #[arg(long, global = true)]
    pub system: Option<SystemKind>,
    /// Inverse temperature in units of the inverse level gap
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Comma-separated entropic orders
    #[arg(long, global = true, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Inclusive order grid lo:hi:step
    #[arg(long = "alpha-range", global = true)]
    pub alpha_range: Option<String>,
    #[arg(long = "theta-points", global = true)]
    pub theta_points: Option<usize>,
    /// Comma-separated detector efficiencies
    #[arg(long, global = true, value_delimiter = ',')]
    pub eta: Option<Vec<f64>>,
    #[arg(long = "theta-over-pi", global = true, allow_negative_numbers = true)]
    pub theta_over_pi: Option<f64>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Data output path (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// SVG chart output path
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// JSON configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub system: Option<SystemKind>,
    pub beta: Option<f64>,
    pub alpha_list: Option<Vec<f64>>,
    pub alpha_range: Option<String>,
    pub theta_points: Option<usize>,
    pub theta_over_pi: Option<f64>,
    pub eta_list: Option<Vec<f64>>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub threads: Option<usize>,
    pub models: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub hidden_states: Option<Vec<usize>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Parameter(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub system: SystemKind,
    pub beta: f64,
    pub alpha_list: Vec<f64>,
    /// `(lo, hi, step)` when the orders came from a range.
    pub alpha_range: Option<(f64, f64, f64)>,
    pub theta_points: usize,
    pub theta_over_pi: f64,
    pub eta_list: Vec<f64>,
    pub epsilon: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub threads: Option<usize>,
    pub models: usize,
    pub dims: Vec<usize>,
    pub hidden_states: Vec<usize>,
}

fn parse_range(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Parameter(format!("alpha range '{s}' is not lo:hi:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|_| bad())?;
    }
    lg::alpha_range(v[0], v[1], v[2])?;
    Ok((v[0], v[1], v[2]))
}

/// Orders plus the `(lo, hi, step)` they came from, if any.
type AlphaChoice = (Vec<f64>, Option<(f64, f64, f64)>);

/// One source's choice of orders: an explicit list or a range, not both.
fn alpha_choice(
    list: Option<Vec<f64>>,
    range: Option<String>,
    source: &str,
) -> Result<Option<AlphaChoice>> {
    match (list, range) {
        (Some(_), Some(_)) => Err(Error::Parameter(format!(
            "{source} gives both an alpha list and an alpha range"
        ))),
        (Some(l), None) => Ok(Some((l, None))),
        (None, Some(r)) => {
            let (lo, hi, step) = parse_range(&r)?;
            Ok(Some((lg::alpha_range(lo, hi, step)?, Some((lo, hi, step)))))
        }
        (None, None) => Ok(None),
    }
}

impl SweepConfig {
    /// Defaults for `command`, overlaid by `file`, overlaid by `flags`.
    pub fn resolve(command: Command, file: ConfigFile, flags: &Flags) -> Result<Self> {
        let fuzz = FuzzConfig::default();
        let default_alphas = match command {
            Command::Extension | Command::Ratio => {
                let (lo, hi, step) = EXTENSION_RANGE;
                (lg::alpha_range(lo, hi, step)?, Some(EXTENSION_RANGE))
            }
            Command::Oracle => (ORACLE_ALPHAS.to_vec(), None),
            Command::Sweep | Command::Inefficiency => (PLOT_ALPHAS.to_vec(), None),
        };
        let (alpha_list, alpha_range) = alpha_choice(
            flags.alpha.clone(),
            flags.alpha_range.clone(),
            "the command line",
        )?
        .or(alpha_choice(
            file.alpha_list,
            file.alpha_range,
            "the config file",
        )?)
        .unwrap_or(default_alphas);

        let cfg = SweepConfig {
            system: flags.system.or(file.system).unwrap_or(SystemKind::Qubit),
            beta: flags.beta.or(file.beta).unwrap_or(1.0),
            alpha_list,
            alpha_range,
            theta_points: flags
                .theta_points
                .or(file.theta_points)
                .unwrap_or(DEFAULT_THETA_POINTS),
            theta_over_pi: flags
                .theta_over_pi
                .or(file.theta_over_pi)
                .unwrap_or(DEFAULT_THETA_OVER_PI),
            eta_list: flags
                .eta
                .clone()
                .or(file.eta_list)
                .unwrap_or_else(|| DEFAULT_ETAS.to_vec()),
            epsilon: flags.epsilon.or(file.epsilon).unwrap_or(DEFAULT_EPSILON),
            seed: flags.seed.or(file.seed).unwrap_or(fuzz.seed),
            out: flags.out.clone().or(file.out),
            svg: flags.svg.clone().or(file.svg),
            threads: flags.threads.or(file.threads),
            models: file.models.unwrap_or(fuzz.models),
            dims: file.dims.unwrap_or(fuzz.dims),
            hidden_states: file.hidden_states.unwrap_or(fuzz.hidden_states),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() {
            return Err(Error::Parameter(format!(
                "beta must be finite, got {}",
                self.beta
            )));
        }
        if self.theta_points < 2 {
            return Err(Error::Parameter(format!(
                "theta_points must be at least 2, got {}",
                self.theta_points
            )));
        }
        if !self.theta_over_pi.is_finite() {
            return Err(Error::Parameter("theta_over_pi must be finite".into()));
        }
        if self.alpha_list.is_empty() {
            return Err(Error::Parameter("alpha list is empty".into()));
        }
        for &a in &self.alpha_list {
            EntropicOrder::at_least_one(a)?;
        }
        for &e in &self.eta_list {
            Efficiency::new(e)?;
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::Parameter(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::Parameter("threads must be positive".into()));
        }
        Ok(())
    }

    fn orders(&self) -> Vec<EntropicOrder> {
        self.alpha_list
            .iter()
            .map(|&a| EntropicOrder::at_least_one(a).expect("validated"))
            .collect()
    }

    fn theta(&self) -> f64 {
        self.theta_over_pi * std::f64::consts::PI
    }
}

/// What a command produced: its data payload, an optional chart and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub data: String,
    pub svg: Option<String>,
    pub code: i32,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::Validation(format!("csv encoding: {e}"));
    w.write_record(header).map_err(to_err)?;
    for r in rows {
        w.write_record(r).map_err(to_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Validation(format!("csv encoding: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv of ascii fields"))
}

fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

pub const SWEEP_HEADER: [&str; 10] = [
    "theta_over_pi",
    "alpha",
    "beta",
    "system",
    "C_alpha",
    "C_tilde",
    "H_W10",
    "H_W21",
    "H_W20",
    "H_E1",
];

pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Output> {
    let grid = ThetaGrid::new(cfg.theta_points)?;
    let orders = cfg.orders();
    let n = grid.points() as f64;
    let per_theta: Vec<Vec<(f64, lg::LgReport)>> = (0..grid.points())
        .into_par_iter()
        .map(|i| {
            let spec = make_protocol(&SystemFamily::new(cfg.system, grid.theta(i), cfg.beta))?;
            let joints = protocol_joints(&spec)?;
            Ok(orders
                .iter()
                .map(|&o| (i as f64 / n, report_from_joints(&joints, o)))
                .collect())
        })
        .collect::<Result<_>>()?;

    let rows: Vec<Vec<String>> = per_theta
        .iter()
        .flatten()
        .map(|(t, r)| {
            vec![
                num(*t),
                num(r.alpha),
                num(cfg.beta),
                cfg.system.to_string(),
                num(r.c_alpha),
                num(r.c_tilde),
                num(r.h_w10),
                num(r.h_w21),
                num(r.h_w20),
                num(r.h_e1),
            ]
        })
        .collect();

    let svg = cfg.svg.as_ref().map(|_| {
        let mut chart = LineChart::new(
            format!("{}, beta = {}", cfg.system, cfg.beta),
            "theta / pi",
            "rescaled C_alpha",
        );
        for (k, o) in orders.iter().enumerate() {
            let pts = per_theta
                .iter()
                .map(|row| (row[k].0, row[k].1.c_tilde))
                .collect();
            chart.push(Series::new(format!("alpha = {}", o.value()), pts));
        }
        chart.render()
    });
    Ok(Output {
        data: csv_text(&SWEEP_HEADER, &rows)?,
        svg,
        code: EXIT_OK,
    })
}

fn structured_error(err: &Error) -> Output {
    Output {
        data: json_text(&json!({ "error": err.kind(), "message": err.to_string() })),
        svg: None,
        code: EXIT_USAGE,
    }
}

pub fn cmd_extension(cfg: &SweepConfig) -> Result<Output> {
    let grid = ThetaGrid::new(cfg.theta_points)?;
    match lg::domain_extension(cfg.system, cfg.beta, &cfg.alpha_list, &grid, cfg.epsilon) {
        Ok(ext) => {
            let lo = cfg.alpha_list.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = cfg
                .alpha_list
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            let value = json!({
                "system": cfg.system,
                "beta": cfg.beta,
                "alpha_range": { "min": lo, "max": hi, "points": cfg.alpha_list.len() },
                "epsilon": cfg.epsilon,
                "domain_alpha1_measure": ext.alpha1_measure,
                "domain_union_measure": ext.union_measure,
                "extension_percent": ext.percent,
            });
            Ok(Output {
                data: json_text(&value),
                svg: None,
                code: EXIT_OK,
            })
        }
        Err(e @ (Error::UndefinedExtension(_) | Error::Parameter(_))) => Ok(structured_error(&e)),
        Err(e) => Err(e),
    }
}

pub const RATIO_HEADER: [&str; 4] = ["alpha", "eta", "ratio", "C_tilde_times_ten"];

pub fn cmd_ratio(cfg: &SweepConfig) -> Result<Output> {
    let spec = make_protocol(&SystemFamily::new(cfg.system, cfg.theta(), cfg.beta))?;
    let joints = protocol_joints(&spec)?;
    let etas: Vec<Efficiency> = cfg
        .eta_list
        .iter()
        .map(|&e| Efficiency::new(e))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut curves: Vec<Vec<(f64, f64)>> = vec![Vec::new(); etas.len()];
    let mut overlay = Vec::new();
    for order in cfg.orders() {
        let ideal = report_from_joints(&joints, order);
        if ideal.c_alpha <= cfg.epsilon {
            return Ok(structured_error(&Error::NoViolation(format!(
                "C_alpha = {:e} <= {:e} at alpha = {}, theta/pi = {}",
                ideal.c_alpha,
                cfg.epsilon,
                order.value(),
                cfg.theta_over_pi
            ))));
        }
        overlay.push((order.value(), 10.0 * ideal.c_tilde));
        for (k, &eta) in etas.iter().enumerate() {
            let rep = report_from_joints_inefficient(&joints, order, eta)?;
            let r = rep.delta / (eta.value().powf(2.0 * order.value()) * ideal.c_alpha);
            curves[k].push((order.value(), r));
            rows.push(vec![
                num(order.value()),
                num(eta.value()),
                num(r),
                num(10.0 * ideal.c_tilde),
            ]);
        }
    }
    let svg = cfg.svg.as_ref().map(|_| {
        let mut chart = LineChart::new(
            format!(
                "{}, beta = {}, theta/pi = {}",
                cfg.system, cfg.beta, cfg.theta_over_pi
            ),
            "alpha",
            "r_alpha(eta)",
        );
        for (eta, pts) in cfg.eta_list.iter().zip(curves) {
            chart.push(Series::new(format!("eta = {eta}"), pts));
        }
        chart.push(Series::new("10 x rescaled C_alpha", overlay).dashed());
        chart.render()
    });
    Ok(Output {
        data: csv_text(&RATIO_HEADER, &rows)?,
        svg,
        code: EXIT_OK,
    })
}

pub fn cmd_oracle(cfg: &SweepConfig) -> Result<Output> {
    let fuzz = FuzzConfig {
        models: cfg.models,
        dims: cfg.dims.clone(),
        hidden_states: cfg.hidden_states.clone(),
        alphas: cfg.alpha_list.clone(),
        seed: cfg.seed,
    };
    let summary = fuzz_classical_bound(&fuzz)?;
    let value = json!({
        "models": summary.models,
        "dims": fuzz.dims,
        "alpha_grid": fuzz.alphas,
        "max_C_alpha": summary.max_c_alpha,
        "violations": summary.violations,
        "seed": fuzz.seed,
    });
    Ok(Output {
        data: json_text(&value),
        svg: None,
        code: if summary.violations > 0 {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        },
    })
}

pub const INEFFICIENCY_HEADER: [&str; 9] = [
    "alpha",
    "eta",
    "C_alpha",
    "C_eta_closed",
    "C_eta_direct",
    "delta",
    "marginal_mismatch",
    "residual",
    "ratio",
];

pub fn cmd_inefficiency(cfg: &SweepConfig) -> Result<Output> {
    let spec = make_protocol(&SystemFamily::new(cfg.system, cfg.theta(), cfg.beta))?;
    let joints = protocol_joints(&spec)?;
    let mut rows = Vec::new();
    for order in cfg.orders() {
        for &e in &cfg.eta_list {
            let r = report_from_joints_inefficient(&joints, order, Efficiency::new(e)?)?;
            rows.push(vec![
                num(r.alpha),
                num(r.eta),
                num(r.c_alpha),
                num(r.c_eta),
                num(r.c_eta_direct),
                num(r.delta),
                num(r.marginal_mismatch),
                num(r.c_eta_direct - r.c_eta - r.marginal_mismatch),
                r.ratio.map(num).unwrap_or_default(),
            ]);
        }
    }
    Ok(Output {
        data: csv_text(&INEFFICIENCY_HEADER, &rows)?,
        svg: None,
        code: EXIT_OK,
    })
}

pub fn execute(command: Command, cfg: &SweepConfig) -> Result<Output> {
    let job = || match command {
        Command::Sweep => cmd_sweep(cfg),
        Command::Extension => cmd_extension(cfg),
        Command::Ratio => cmd_ratio(cfg),
        Command::Oracle => cmd_oracle(cfg),
        Command::Inefficiency => cmd_inefficiency(cfg),
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?
            .install(job),
        None => job(),
    }
}

fn write_to(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn run_inner(cli: &Cli) -> Result<i32> {
    let file = match &cli.flags.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let cfg = SweepConfig::resolve(cli.command, file, &cli.flags)?;
    let output = execute(cli.command, &cfg)?;
    write_to(cfg.out.as_deref(), &output.data)?;
    if let (Some(path), Some(svg)) = (&cfg.svg, &output.svg) {
        write_to(Some(path), svg)?;
    }
    Ok(output.code)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match run_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
