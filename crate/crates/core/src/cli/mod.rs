//! The `rcpt` command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parameter error,
//! 3 numerical failure.

pub mod figures;
pub mod output;
pub mod parse;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::json;

use crate::acceptance::{self, Settings, CRITERIA};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::ModelParams;
use crate::rcpt::{diagonalize_effective, effective_blocks, effective_hamiltonian};
use crate::redfield::{simulate, steady, GeneratorKind, Method, SimulationConfig};
use crate::timescales::{analyze, tau_high_temperature, tau_low_temperature};
use output::{join, num, trajectory_fields, CsvWriter, RunManifest, STEADY_HEADER, SWEEP_HEADER, TRAJECTORY_HEADER};
pub use parse::{parse_density, parse_init, parse_range, InitSpec, RangeSpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_PARAMETER: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// Exit code for a failed run.
pub fn exit_code(e: &Error) -> u8 {
    if e.is_input_error() || matches!(e, Error::Io { .. } | Error::OutOfRegime(_)) {
        EXIT_PARAMETER
    } else {
        EXIT_NUMERICAL
    }
}

#[derive(Debug, Parser)]
#[command(name = "rcpt", version, about = "Effective-Hamiltonian dynamics of a strongly damped three-level system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Effective Hamiltonian, its blocks and its spectrum.
    Map(PointArgs),
    /// Analytic relaxation timescales and their limits.
    Timescales(PointArgs),
    /// Time evolution of the reduced density matrix.
    Dynamics(DynamicsArgs),
    /// Steady state of the chosen generator.
    Steadystate(SteadyArgs),
    /// Data and SVG for one of figures 2-8.
    Figure(FigureArgs),
    /// Analytic timescales over a parameter range.
    Sweep(SweepArgs),
    /// Acceptance battery with a JSON report.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// JSON parameter file, or a preset name (fig2 ... fig8).
    #[arg(long)]
    pub params: Option<String>,
    /// System-RC coupling strength.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Detuning of site 2 below site 3.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Bath temperature.
    #[arg(long, allow_negative_numbers = true)]
    pub temp: Option<f64>,
    /// Reaction-coordinate frequency.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Damping strength of the residual Ohmic bath.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Exponential cutoff of the Ohmic baths.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "no_cutoff")]
    pub cutoff: Option<f64>,
    /// Pure Ohmic baths without the exponential cutoff.
    #[arg(long)]
    pub no_cutoff: bool,
}

impl ParamArgs {
    /// `--params` (or `default_preset`, or the built-in defaults), then the
    /// individual overrides.
    pub fn resolve(&self, default_preset: Option<&str>) -> Result<ModelParams> {
        let mut p = match (&self.params, default_preset) {
            (Some(src), _) => parse::load_params(src)?,
            (None, Some(name)) => figures::preset(name).unwrap_or_default(),
            (None, None) => ModelParams::default(),
        };
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut p.lambda, self.lambda);
        set(&mut p.delta, self.delta);
        set(&mut p.temperature, self.temp);
        set(&mut p.omega, self.omega);
        set(&mut p.gamma, self.gamma);
        set(&mut p.cutoff, self.cutoff);
        if self.no_cutoff {
            p.cutoff = f64::INFINITY;
        }
        for w in p.validate()? {
            eprintln!("warning: {w}");
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory, created if missing.
    #[arg(long, default_value = "rcpt-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Uw,
    Rc,
    Effh,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Uw => Method::Uw,
            MethodArg::Rc => Method::Rc,
            MethodArg::Effh => Method::Effh,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct MethodArgs {
    /// Weak-coupling, explicit reaction coordinate, or effective Hamiltonian.
    #[arg(long, value_enum, default_value = "effh")]
    pub method: MethodArg,
    /// Fock levels kept for the reaction coordinate (RC method).
    #[arg(long, default_value_t = crate::redfield::DEFAULT_RC_LEVELS)]
    pub rc_levels: usize,
    /// Fully secular Lindblad generator instead of Redfield (effh only).
    #[arg(long)]
    pub secular: bool,
}

impl MethodArgs {
    fn config(&self, params: ModelParams, init: Array2<C64>) -> SimulationConfig {
        let mut c = SimulationConfig::new(self.method.into(), params, init);
        c.rc_levels = Some(self.rc_levels);
        if self.secular {
            c.generator = GeneratorKind::SecularLindblad;
        }
        c
    }

    fn label(&self) -> String {
        let m: Method = self.method.into();
        if self.secular {
            format!("{}-secular", m.as_str())
        } else {
            m.as_str().to_string()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// First output time.
    #[arg(long, default_value_t = 1e-2)]
    pub t_min: f64,
    /// Last output time.
    #[arg(long, default_value_t = 1e7)]
    pub t_max: f64,
    /// Number of log-spaced output times.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

impl GridArgs {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !(self.t_min > 0.0 && self.t_min.is_finite()) {
            return Err(Error::param("t-min", self.t_min, "must be finite and > 0"));
        }
        if !(self.t_max > self.t_min && self.t_max.is_finite()) {
            return Err(Error::param("t-max", self.t_max, "must be finite and > t-min"));
        }
        if self.points < 2 {
            return Err(Error::param("points", self.points as f64, "must be >= 2"));
        }
        Ok(linalg::log_space(self.t_min, self.t_max, self.points))
    }

    fn manifest(&self) -> serde_json::Value {
        json!({"t_min": self.t_min, "t_max": self.t_max, "points": self.points})
    }
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub method: MethodArgs,
    /// uniform, ground, or file:<path> with a 3x3 density matrix.
    #[arg(long, default_value = "uniform", value_parser = init_arg)]
    pub init: InitSpec,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SteadyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure number, 2-8.
    #[arg(value_parser = clap::value_parser!(u8).range(2..=8))]
    pub id: u8,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Fock levels kept for the reaction coordinate in RC runs.
    #[arg(long, default_value_t = crate::redfield::DEFAULT_RC_LEVELS)]
    pub rc_levels: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Wall-clock budget in seconds; checked around every RC run.
    #[arg(long, default_value_t = 900.0)]
    pub budget: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Lambda,
    Delta,
    #[value(alias = "temp", alias = "T")]
    Temperature,
}

impl Axis {
    fn apply(self, p: ModelParams, x: f64) -> ModelParams {
        match self {
            Axis::Lambda => p.with_lambda(x),
            Axis::Delta => p.with_delta(x),
            Axis::Temperature => p.with_temperature(x),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Axis::Lambda => "lambda",
            Axis::Delta => "delta",
            Axis::Temperature => "temperature",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Parameter varied across the sweep.
    #[arg(long, value_enum)]
    pub axis: Axis,
    /// a:b:n, n evenly spaced values from a to b.
    #[arg(long, value_parser = range_arg)]
    pub range: RangeSpec,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Comma-separated criterion numbers; all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
    /// Multiplies every tolerance. Test hook.
    #[arg(long, hide = true, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

fn range_arg(s: &str) -> std::result::Result<RangeSpec, String> {
    parse_range(s).map_err(|e| e.to_string())
}

fn init_arg(s: &str) -> std::result::Result<InitSpec, String> {
    parse_init(s).map_err(|e| e.to_string())
}

/// What a finished command reports back to `main`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ValidationFailed,
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Map(a) => run_map(a),
        Command::Timescales(a) => run_timescales(a),
        Command::Dynamics(a) => run_dynamics(a),
        Command::Steadystate(a) => run_steadystate(a),
        Command::Figure(a) => run_figure(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Validate(a) => run_validate(a),
    }
    .map(|ok| if ok { Outcome::Success } else { Outcome::ValidationFailed })
}

fn prepare(out: &OutArgs) -> Result<&Path> {
    output::create_dir(&out.out)?;
    Ok(&out.out)
}

fn manifest(command: &'static str, params: ModelParams, options: serde_json::Value, dir: &Path, outputs: &[&str]) -> RunManifest {
    RunManifest {
        command,
        params,
        options,
        output_dir: dir.display().to_string(),
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
        version: env!("CARGO_PKG_VERSION"),
    }
}

fn run_map(a: &PointArgs) -> Result<bool> {
    let p = a.params.resolve(None)?;
    let dir = prepare(&a.out)?;
    let blocks = effective_blocks(&p)?;
    let h = effective_hamiltonian(&p)?.into_inner();
    let s = diagonalize_effective(&p)?;
    let h_re: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| h[(i, j)].re).collect()).collect();
    let doc = json!({
        "params": p,
        "hamiltonian": h_re,
        "blocks": blocks,
        "spectrum": {
            "E0": s.e0, "Eminus": s.e_minus, "Eplus": s.e_plus,
            "phi": s.phi, "p": s.p, "q": s.q, "p2": s.p_sq(), "q2": s.q_sq(),
            "Eplus0": s.e_plus_0(), "Eminus0": s.e_minus_0(),
        },
    });
    output::write_json(&dir.join("map.json"), &doc)?;
    let mut header = "lambda,delta,T,e0,l,w,h,E0,Eminus,Eplus,phi,p2,q2".to_string();
    let mut values = vec![
        p.lambda, p.delta, p.temperature, blocks.e0, blocks.l, blocks.w, blocks.h, s.e0, s.e_minus, s.e_plus, s.phi,
        s.p_sq(), s.q_sq(),
    ];
    for i in 0..3 {
        for j in 0..3 {
            header.push_str(&format!(",H{}{}", i + 1, j + 1));
            values.push(h_re[i][j]);
        }
    }
    let mut w = CsvWriter::create(&dir.join("map.csv"), &header)?;
    w.row(&join(&values))?;
    manifest("map", p, json!({}), dir, &["map.json", "map.csv"]).write(dir)?;
    println!("E0 = {}  E- = {}  E+ = {}  p^2 = {}  q^2 = {}", s.e0, s.e_minus, s.e_plus, s.p_sq(), s.q_sq());
    Ok(true)
}

/// One sweep-table row. Points outside the analytic regime keep their
/// spectrum and report `nan` timescales.
pub fn sweep_row(p: &ModelParams) -> Result<(String, Option<String>)> {
    let s = diagonalize_effective(p)?;
    let tail = [s.p_sq(), s.q_sq(), s.e0, s.e_minus, s.e_plus];
    let (taus, note) = match analyze(p) {
        Ok(a) => {
            let lo = tau_low_temperature(&a.spectrum, p);
            let hi = tau_high_temperature(&a.spectrum, p);
            let v = [&a.timescales, &lo, &hi].map(|t| [t.tau1.value(), t.tau2.value()]);
            (v.concat(), None)
        }
        Err(e @ Error::OutOfRegime(_)) => (vec![f64::NAN; 6], Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let mut values = vec![p.lambda, p.delta, p.temperature];
    values.extend(taus);
    values.extend(tail);
    Ok((join(&values), note))
}

fn run_timescales(a: &PointArgs) -> Result<bool> {
    let p = a.params.resolve(None)?;
    let dir = prepare(&a.out)?;
    let pt = analyze(&p)?;
    let lo = tau_low_temperature(&pt.spectrum, &p);
    let hi = tau_high_temperature(&pt.spectrum, &p);
    let populations = pt.rate_matrix.steady_state()?;
    let doc = json!({
        "params": p,
        "tau1": pt.timescales.tau1,
        "tau2": pt.timescales.tau2,
        "low_temperature": lo,
        "high_temperature": hi,
        "rates": pt.rates,
        "rate_matrix": pt.rate_matrix,
        "steady_state": {"rho_minus_minus": populations[0], "rho_plus_plus": populations[1]},
        "p2": pt.spectrum.p_sq(),
        "q2": pt.spectrum.q_sq(),
    });
    output::write_json(&dir.join("timescales.json"), &doc)?;
    let (row, _) = sweep_row(&p)?;
    let mut w = CsvWriter::create(&dir.join("timescales.csv"), SWEEP_HEADER)?;
    w.row(&row)?;
    manifest("timescales", p, json!({}), dir, &["timescales.json", "timescales.csv"]).write(dir)?;
    println!("tau1 = {}  tau2 = {}", pt.timescales.tau1, pt.timescales.tau2);
    Ok(true)
}

fn run_dynamics(a: &DynamicsArgs) -> Result<bool> {
    let p = a.params.resolve(None)?;
    let mut config = a.method.config(p, a.init.density()?);
    config.time_grid = a.grid.grid()?;
    config.validate()?;
    let dir = prepare(&a.out)?;
    let sim = simulate(&config)?;
    let mut w = CsvWriter::create(&dir.join("trajectory.csv"), TRAJECTORY_HEADER)?;
    for r in &sim.rows {
        w.row(&trajectory_fields(r))?;
    }
    let last = sim.rows.last().copied();
    let summary = json!({
        "propagator": sim.trajectory.propagator,
        "condition_number": sim.trajectory.condition,
        "max_real_part": sim.trajectory.max_real_part,
        "final": last,
        "max_trace_err": sim.rows.iter().map(|r| r.trace_err).fold(0.0, f64::max),
        "max_hermiticity_err": sim.rows.iter().map(|r| r.hermiticity_err).fold(0.0, f64::max),
        "min_eig": sim.rows.iter().map(|r| r.min_eig).fold(f64::INFINITY, f64::min),
    });
    output::write_json(&dir.join("dynamics.json"), &summary)?;
    let options = json!({
        "method": a.method.label(),
        "rc_levels": a.method.rc_levels,
        "init": a.init.label(),
        "grid": a.grid.manifest(),
    });
    manifest("dynamics", p, options, dir, &["trajectory.csv", "dynamics.json"]).write(dir)?;
    if let Some(r) = last {
        println!("t = {}: rho11 = {} rho22 = {} rho33 = {} rho32 = {}{:+}i", r.t, r.rho11, r.rho22, r.rho33, r.re_rho32, r.im_rho32);
    }
    Ok(true)
}

fn run_steadystate(a: &SteadyArgs) -> Result<bool> {
    let p = a.params.resolve(None)?;
    let config = a.method.config(p, crate::redfield::uniform_state());
    config.validate()?;
    let dir = prepare(&a.out)?;
    let ss = steady(&config)?;
    let r = ss.row;
    let mut w = CsvWriter::create(&dir.join("steadystate.csv"), STEADY_HEADER)?;
    w.row(&format!(
        "{},{},{},{}",
        num(p.lambda),
        a.method.label(),
        join(&[r.rho11, r.rho22, r.rho33, r.re_rho32, r.im_rho32]),
        num(ss.full.residual)
    ))?;
    let re: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| ss.site[(i, j)].re).collect()).collect();
    let im: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| ss.site[(i, j)].im).collect()).collect();
    let doc = json!({"params": p, "method": a.method.label(), "rho_re": re, "rho_im": im, "residual": ss.full.residual});
    output::write_json(&dir.join("steadystate.json"), &doc)?;
    let options = json!({"method": a.method.label(), "rc_levels": a.method.rc_levels});
    manifest("steadystate", p, options, dir, &["steadystate.csv", "steadystate.json"]).write(dir)?;
    println!("rho11 = {} rho22 = {} rho33 = {} |rho32| = {} residual = {:e}", r.rho11, r.rho22, r.rho33, r.re_rho32.hypot(r.im_rho32), ss.full.residual);
    Ok(true)
}

fn run_figure(a: &FigureArgs) -> Result<bool> {
    let preset = format!("fig{}", a.id);
    let p = a.params.resolve(Some(&preset))?;
    if !(a.budget >= 0.0) {
        return Err(Error::param("budget", a.budget, "must be >= 0"));
    }
    let dir = prepare(&a.out)?;
    let options = json!({
        "figure": a.id,
        "preset": a.params.params.clone().unwrap_or(preset),
        "rc_levels": a.rc_levels,
        "grid": a.grid.manifest(),
        "budget_s": a.budget,
    });
    let req = figures::FigureRequest {
        id: a.id,
        params: p,
        rc_levels: a.rc_levels,
        time_grid: a.grid.grid()?,
        budget_s: a.budget,
        out: dir.to_path_buf(),
    };
    // The manifest goes first so an aborted run still records its inputs.
    let csv = format!("fig{}.csv", a.id);
    manifest("figure", p, options.clone(), dir, &[&csv]).write(dir)?;
    let files = figures::run_figure(&req)?;
    let names: Vec<&str> = files.iter().map(String::as_str).collect();
    manifest("figure", p, options, dir, &names).write(dir)?;
    println!("wrote {}", files.join(", "));
    Ok(true)
}

fn run_sweep(a: &SweepArgs) -> Result<bool> {
    let base = a.params.resolve(None)?;
    let points: Vec<ModelParams> = a.range.values().into_iter().map(|x| a.axis.apply(base, x)).collect();
    for p in &points {
        p.validate()?;
    }
    let dir = prepare(&a.out)?;
    let point_dir = dir.join("points");
    output::create_dir(&point_dir)?;
    let rows: Vec<(String, Option<String>)> = points
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            let (row, note) = sweep_row(p)?;
            let mut w = CsvWriter::create(&point_dir.join(format!("point_{k:05}.csv")), SWEEP_HEADER)?;
            w.row(&row)?;
            Ok((row, note))
        })
        .collect::<Result<_>>()?;
    let mut merged = CsvWriter::create(&dir.join("sweep.csv"), SWEEP_HEADER)?;
    for (k, (row, note)) in rows.iter().enumerate() {
        merged.row(row)?;
        if let Some(n) = note {
            eprintln!("warning: point {k}: {n}");
        }
    }
    let options = json!({
        "axis": a.axis.name(),
        "range": {"start": a.range.start, "end": a.range.end, "count": a.range.count},
    });
    manifest("sweep", base, options, dir, &["sweep.csv", "points/"]).write(dir)?;
    println!("wrote {} points to {}", rows.len(), dir.join("sweep.csv").display());
    Ok(true)
}

fn run_validate(a: &ValidateArgs) -> Result<bool> {
    if !(a.tolerance_scale > 0.0 && a.tolerance_scale.is_finite()) {
        return Err(Error::param("tolerance-scale", a.tolerance_scale, "must be finite and > 0"));
    }
    let ids: Vec<u8> = if a.criteria.is_empty() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        a.criteria.clone()
    };
    for &id in &ids {
        if !CRITERIA.iter().any(|c| c.0 == id) {
            return Err(Error::param("criteria", id as f64, "no such acceptance criterion"));
        }
    }
    let dir = prepare(&a.out)?;
    let settings = Settings {
        tolerance_scale: a.tolerance_scale,
    };
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut summary = String::new();
    for id in ids {
        let r = acceptance::run(id, &settings);
        let line = r.summary_line();
        println!("{line}");
        summary.push_str(&line);
        summary.push('\n');
        reports.push(r);
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let total = format!(
        "{} of {} criteria passed in {:.1} s\n",
        reports.len() - failed,
        reports.len(),
        start.elapsed().as_secs_f64()
    );
    print!("{total}");
    summary.push_str(&total);
    let doc = json!({
        "tolerance_scale": a.tolerance_scale,
        "passed": failed == 0,
        "failed": failed,
        "criteria": reports.iter().map(|r| {
            let mut v = serde_json::to_value(r).unwrap_or_default();
            v["passed"] = json!(r.passed());
            v
        }).collect::<Vec<_>>(),
    });
    output::write_json(&dir.join("validate.json"), &doc)?;
    output::write_text(&dir.join("validate.txt"), &summary)?;
    let options = json!({"criteria": reports.iter().map(|r| r.id).collect::<Vec<_>>(), "tolerance_scale": a.tolerance_scale});
    manifest("validate", ModelParams::default(), options, dir, &["validate.json", "validate.txt"]).write(dir)?;
    Ok(failed == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::param("x", 1.0, "bad")), EXIT_PARAMETER);
        assert_eq!(exit_code(&Error::OutOfRegime("x".into())), EXIT_PARAMETER);
        assert_eq!(exit_code(&Error::Numerical("x".into())), EXIT_NUMERICAL);
        assert_eq!(exit_code(&Error::MultipleSteadyStates { count: 2 }), EXIT_NUMERICAL);
        let budget = Error::Budget {
            elapsed: 2.0,
            limit: 1.0,
            partial: "f.csv".into(),
        };
        assert_eq!(exit_code(&budget), EXIT_NUMERICAL);
    }

    #[test]
    fn flag_overrides_apply_after_params() {
        let cli = Cli::try_parse_from(["rcpt", "map", "--params", "fig6", "--lambda", "5", "--no-cutoff"]).unwrap();
        let Command::Map(a) = cli.command else { panic!() };
        let p = a.params.resolve(None).unwrap();
        assert_eq!(p.lambda, 5.0);
        assert!(p.cutoff.is_infinite());
        assert!(Cli::try_parse_from(["rcpt", "figure", "9"]).is_err());
        assert!(Cli::try_parse_from(["rcpt", "sweep", "--axis", "lambda", "--range", "1:2"]).is_err());
        assert!(Cli::try_parse_from(["rcpt", "map", "--cutoff", "5", "--no-cutoff"]).is_err());
    }

    #[test]
    fn sweep_rows_match_header() {
        let (row, note) = sweep_row(&ModelParams::default()).unwrap();
        assert!(note.is_none());
        assert_eq!(row.split(',').count(), SWEEP_HEADER.split(',').count());
    }
}
