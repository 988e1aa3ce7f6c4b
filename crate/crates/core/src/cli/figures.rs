//! Data and plots for figures 2-8.

use std::path::{Path, PathBuf};
use std::time::Instant;

use super::output::{join, num, trajectory_fields, CsvWriter, STEADY_HEADER, TRAJECTORY_HEADER};
use super::svg::{self, Panel, Series};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::ModelParams;
use crate::rcpt::diagonalize_effective;
use crate::redfield::{
    ground_state, simulate, steady, uniform_state, GeneratorKind, Method, ObservableRow, SimulationConfig,
};
use crate::timescales::{analyze, tau_high_temperature, tau_low_temperature};

pub const FIGURE_IDS: [u8; 7] = [2, 3, 4, 5, 6, 7, 8];

/// Splittings drawn as separate curves in figures 3-5.
pub const FIG_DELTAS: [f64; 5] = [0.01, 0.02, 0.03, 0.1, 0.5];
/// Couplings of the dynamics panels in figures 6 and 8.
pub const DYNAMICS_LAMBDAS: [f64; 4] = [0.1, 1.0, 3.0, 5.0];

/// Caption parameters: v = 1, delta = 0.01, omega = 10, gamma = 0.05,
/// cutoff = 1000, T = 1. Each figure sweeps its own axes on top of these.
pub fn preset(name: &str) -> Option<ModelParams> {
    let id: u8 = name.strip_prefix("fig")?.parse().ok()?;
    FIGURE_IDS.contains(&id).then_some(ModelParams {
        v: 1.0,
        delta: 0.01,
        lambda: 1.0,
        omega: 10.0,
        gamma: 0.05,
        cutoff: 1000.0,
        temperature: 1.0,
    })
}

#[derive(Debug, Clone)]
pub struct FigureRequest {
    pub id: u8,
    pub params: ModelParams,
    pub rc_levels: usize,
    pub time_grid: Vec<f64>,
    /// Wall-clock limit in seconds, checked around every RC run.
    pub budget_s: f64,
    pub out: PathBuf,
}

struct Budget {
    start: Instant,
    limit: f64,
}

impl Budget {
    fn check(&self, partial: &Path) -> Result<()> {
        let elapsed = self.start.elapsed().as_secs_f64();
        if elapsed > self.limit {
            return Err(Error::Budget {
                elapsed,
                limit: self.limit,
                partial: partial.display().to_string(),
            });
        }
        Ok(())
    }
}

/// Writes `figN.csv` and `figN.svg` (plus `fig8_markers.csv`) and returns
/// the file names.
pub fn run_figure(req: &FigureRequest) -> Result<Vec<String>> {
    let name = format!("fig{}", req.id);
    let csv = req.out.join(format!("{name}.csv"));
    let budget = Budget {
        start: Instant::now(),
        limit: req.budget_s,
    };
    let mut files = vec![format!("{name}.csv"), format!("{name}.svg")];
    let (panels, cols) = match req.id {
        2 => fig2(req, &csv)?,
        3 => fig3(req, &csv)?,
        4 => fig4(req, &csv)?,
        5 => fig5(req, &csv)?,
        6 => fig6(req, &csv, &budget)?,
        7 => fig7(req, &csv, &budget)?,
        8 => {
            files.push("fig8_markers.csv".into());
            fig8(req, &csv)?
        }
        other => {
            return Err(Error::param("figure", other as f64, "must be one of 2-8"));
        }
    };
    super::output::write_text(&req.out.join(format!("{name}.svg")), &svg::render(&panels, cols))?;
    Ok(files)
}

fn fig2(req: &FigureRequest, csv: &Path) -> Result<(Vec<Panel>, usize)> {
    let mut w = CsvWriter::create(csv, "lambda,E0,Eminus,Eplus")?;
    let mut curves = [Vec::new(), Vec::new(), Vec::new()];
    for l in linalg::lin_space(0.0, 10.0, 201) {
        let s = diagonalize_effective(&req.params.with_lambda(l))?;
        w.row(&join(&[l, s.e0, s.e_minus, s.e_plus]))?;
        for (c, e) in curves.iter_mut().zip([s.e0, s.e_minus, s.e_plus]) {
            c.push((l, e));
        }
    }
    let [e0, em, ep] = curves;
    let panel = Panel {
        title: "Effective eigenvalues".into(),
        x_label: "lambda".into(),
        y_label: "energy".into(),
        series: vec![Series::new("E0", e0), Series::new("E-", em), Series::new("E+", ep)],
        ..Panel::default()
    };
    Ok((vec![panel], 1))
}

fn fig3(req: &FigureRequest, csv: &Path) -> Result<(Vec<Panel>, usize)> {
    let mut w = CsvWriter::create(csv, "panel,T,lambda,delta,tau1,tau2")?;
    let temps = [0.5, 1.0, 2.0, 5.0];
    let mut panels = Vec::new();
    for (k, &t) in temps.iter().enumerate() {
        let label = (b'a' + k as u8) as char;
        let mut series = Vec::new();
        for (c, &d) in FIG_DELTAS.iter().enumerate() {
            let (mut s1, mut s2) = (Vec::new(), Vec::new());
            for l in linalg::lin_space(0.2, 10.0, 99) {
                let ts = analyze(&req.params.with_temperature(t).with_delta(d).with_lambda(l))?.timescales;
                let (t1, t2) = (ts.tau1.value(), ts.tau2.value());
                w.row(&format!("{label},{}", join(&[t, l, d, t1, t2])))?;
                s1.push((l, t1));
                s2.push((l, t2));
            }
            series.push(Series::new(format!("tau2 d={d}"), s2).colored(c));
            series.push(Series::new(format!("tau1 d={d}"), s1).dashed().colored(c));
        }
        panels.push(Panel {
            title: format!("({label}) T = {t}"),
            x_label: "lambda".into(),
            y_label: "timescale".into(),
            y_log: true,
            series,
            ..Panel::default()
        });
    }
    for (k, &t) in temps.iter().enumerate() {
        let label = (b'e' + k as u8) as char;
        let mut series = Vec::new();
        for (c, &l) in [0.1, 1.0, 3.0, 5.0, 10.0].iter().enumerate() {
            let (mut s1, mut s2) = (Vec::new(), Vec::new());
            for d in linalg::log_space(1e-3, 0.5, 60) {
                let ts = analyze(&req.params.with_temperature(t).with_delta(d).with_lambda(l))?.timescales;
                let (t1, t2) = (ts.tau1.value(), ts.tau2.value());
                w.row(&format!("{label},{}", join(&[t, l, d, t1, t2])))?;
                s1.push((d, t1));
                s2.push((d, t2));
            }
            series.push(Series::new(format!("tau2 l={l}"), s2).colored(c));
            series.push(Series::new(format!("tau1 l={l}"), s1).dashed().colored(c));
        }
        panels.push(Panel {
            title: format!("({label}) T = {t}"),
            x_label: "delta".into(),
            y_label: "timescale".into(),
            x_log: true,
            y_log: true,
            series,
            ..Panel::default()
        });
    }
    Ok((panels, 4))
}

fn fig4(req: &FigureRequest, csv: &Path) -> Result<(Vec<Panel>, usize)> {
    let mut w = CsvWriter::create(csv, "lambda,delta,p2,q2,Eplus0,Eminus0")?;
    let mut weights = Vec::new();
    let mut bohr = Vec::new();
    for (c, &d) in FIG_DELTAS.iter().enumerate() {
        let mut curves = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
        for l in linalg::lin_space(0.0, 10.0, 201) {
            let s = diagonalize_effective(&req.params.with_delta(d).with_lambda(l))?;
            let row = [s.p_sq(), s.q_sq(), s.e_plus_0(), s.e_minus_0()];
            w.row(&format!("{},{}", join(&[l, d]), join(&row)))?;
            for (c, v) in curves.iter_mut().zip(row) {
                c.push((l, v));
            }
        }
        let [p2, q2, ep, em] = curves;
        weights.push(Series::new(format!("p2 d={d}"), p2).colored(c));
        weights.push(Series::new(format!("q2 d={d}"), q2).dashed().colored(c));
        bohr.push(Series::new(format!("E+0 d={d}"), ep).colored(c));
        bohr.push(Series::new(format!("E-0 d={d}"), em).dashed().colored(c));
    }
    let panels = vec![
        Panel {
            title: "(a) channel weights".into(),
            x_label: "lambda".into(),
            y_label: "p^2, q^2".into(),
            y_log: true,
            series: weights,
            ..Panel::default()
        },
        Panel {
            title: "(b) Bohr frequencies".into(),
            x_label: "lambda".into(),
            y_label: "E+0, E-0".into(),
            y_log: true,
            series: bohr,
            ..Panel::default()
        },
    ];
    Ok((panels, 2))
}

fn fig5(req: &FigureRequest, csv: &Path) -> Result<(Vec<Panel>, usize)> {
    let mut w = CsvWriter::create(csv, "panel,T,lambda,delta,tau1,tau2,tau1_approx,tau2_approx")?;
    let mut panels = Vec::new();
    for (label, t, high) in [('a', 0.1, false), ('b', 5.0, true)] {
        let mut series = Vec::new();
        for (c, &d) in FIG_DELTAS.iter().enumerate() {
            let mut curves = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
            for l in linalg::lin_space(0.2, 10.0, 99) {
                let p = req.params.with_temperature(t).with_delta(d).with_lambda(l);
                let a = analyze(&p)?;
                let approx = if high {
                    tau_high_temperature(&a.spectrum, &p)
                } else {
                    tau_low_temperature(&a.spectrum, &p)
                };
                let row = [
                    a.timescales.tau1.value(),
                    a.timescales.tau2.value(),
                    approx.tau1.value(),
                    approx.tau2.value(),
                ];
                w.row(&format!("{label},{},{}", join(&[t, l, d]), join(&row)))?;
                for (c, v) in curves.iter_mut().zip(row) {
                    c.push((l, v));
                }
            }
            let [t1, t2, a1, a2] = curves;
            series.push(Series::new(format!("d={d}"), t1).colored(c));
            series.push(Series::new("", t2).colored(c));
            series.push(Series::new("", a1).dashed().colored(c));
            series.push(Series::new("", a2).dashed().colored(c));
        }
        panels.push(Panel {
            title: format!("({label}) T = {t}, {} limit", if high { "high-T" } else { "low-T" }),
            x_label: "lambda".into(),
            y_label: "timescale".into(),
            y_log: true,
            series,
            ..Panel::default()
        });
    }
    Ok((panels, 2))
}

fn dynamics_config(req: &FigureRequest, method: Method, lambda: f64, init: ndarray::Array2<num_complex::Complex64>) -> SimulationConfig {
    let mut c = SimulationConfig::new(method, req.params.with_lambda(lambda), init);
    c.generator = GeneratorKind::Redfield;
    c.rc_levels = Some(req.rc_levels);
    c.time_grid = req.time_grid.clone();
    c
}

fn population_series(prefix: &str, rows: &[ObservableRow], dashed: bool) -> Vec<Series> {
    let pick = |f: fn(&ObservableRow) -> f64| rows.iter().map(|r| (r.t, f(r))).collect::<Vec<_>>();
    let mut out = vec![
        Series::new(format!("{prefix} rho11"), pick(|r| r.rho11)),
        Series::new(format!("{prefix} rho22"), pick(|r| r.rho22)),
        Series::new(format!("{prefix} rho33"), pick(|r| r.rho33)),
    ];
    if dashed {
        out = out.into_iter().map(Series::dashed).collect();
    }
    out
}

fn fig6(req: &FigureRequest, csv: &Path, budget: &Budget) -> Result<(Vec<Panel>, usize)> {
    let mut w = CsvWriter::create(csv, &format!("method,lambda,{TRAJECTORY_HEADER}"))?;
    let mut pop_panels = Vec::new();
    let mut coh_panels = Vec::new();
    for (k, &l) in DYNAMICS_LAMBDAS.iter().enumerate() {
        let mut pops = Vec::new();
        let mut coh = Vec::new();
        for method in [Method::Uw, Method::Rc, Method::Effh] {
            if method == Method::Rc {
                budget.check(csv)?;
            }
            let sim = simulate(&dynamics_config(req, method, l, uniform_state()))?;
            for r in &sim.rows {
                w.row(&format!("{},{},{}", method.as_str(), num(l), trajectory_fields(r)))?;
            }
            if method == Method::Rc {
                budget.check(csv)?;
            }
            let tag = method.as_str().to_uppercase();
            pops.extend(population_series(&tag, &sim.rows, method == Method::Rc));
            let re: Vec<_> = sim.rows.iter().map(|r| (r.t, r.re_rho32)).collect();
            let im: Vec<_> = sim.rows.iter().map(|r| (r.t, r.im_rho32)).collect();
            coh.push(Series::new(format!("{tag} Re rho32"), re));
            coh.push(Series::new(format!("{tag} Im rho32"), im).dashed());
        }
        pop_panels.push(Panel {
            title: format!("({}) lambda = {l}", (b'a' + k as u8) as char),
            x_label: "t".into(),
            y_label: "population".into(),
            x_log: true,
            series: pops,
            ..Panel::default()
        });
        coh_panels.push(Panel {
            title: format!("({}) lambda = {l}", (b'e' + k as u8) as char),
            x_label: "t".into(),
            y_label: "coherence".into(),
            x_log: true,
            series: coh,
            ..Panel::default()
        });
    }
    pop_panels.extend(coh_panels);
    Ok((pop_panels, 4))
}

fn fig7(req: &FigureRequest, csv: &Path, budget: &Budget) -> Result<(Vec<Panel>, usize)> {
    let mut w = CsvWriter::create(csv, STEADY_HEADER)?;
    let mut pops: Vec<Series> = Vec::new();
    let mut coh: Vec<Series> = Vec::new();
    for method in [Method::Rc, Method::Effh] {
        let tag = method.as_str().to_uppercase();
        for name in ["rho11", "rho22", "rho33"] {
            pops.push(Series::new(format!("{tag} {name}"), Vec::new()));
        }
        coh.push(Series::new(format!("{tag} Re rho32"), Vec::new()));
        coh.push(Series::new(format!("{tag} Im rho32"), Vec::new()));
    }
    for l in linalg::lin_space(0.5, 10.0, 20) {
        for (m, method) in [Method::Rc, Method::Effh].into_iter().enumerate() {
            if method == Method::Rc {
                budget.check(csv)?;
            }
            let ss = steady(&dynamics_config(req, method, l, uniform_state()))?;
            let r = ss.row;
            w.row(&format!(
                "{},{},{},{}",
                num(l),
                method.as_str(),
                join(&[r.rho11, r.rho22, r.rho33, r.re_rho32, r.im_rho32]),
                num(ss.full.residual)
            ))?;
            for (k, v) in [r.rho11, r.rho22, r.rho33].into_iter().enumerate() {
                pops[3 * m + k].points.push((l, v));
            }
            coh[2 * m].points.push((l, r.re_rho32));
            coh[2 * m + 1].points.push((l, r.im_rho32));
        }
    }
    for s in pops.iter_mut().take(3).chain(coh.iter_mut().take(2)) {
        s.dashed = true;
    }
    let panels = vec![
        Panel {
            title: "(a) steady-state populations".into(),
            x_label: "lambda".into(),
            y_label: "population".into(),
            series: pops,
            ..Panel::default()
        },
        Panel {
            title: "(b) steady-state coherence".into(),
            x_label: "lambda".into(),
            y_label: "rho32".into(),
            series: coh,
            ..Panel::default()
        },
    ];
    Ok((panels, 2))
}

fn fig8(req: &FigureRequest, csv: &Path) -> Result<(Vec<Panel>, usize)> {
    let mut w = CsvWriter::create(csv, &format!("lambda,init,{TRAJECTORY_HEADER}"))?;
    let mut markers = CsvWriter::create(&req.out.join("fig8_markers.csv"), "lambda,tau1,tau2")?;
    let mut panels = Vec::new();
    for (k, &l) in DYNAMICS_LAMBDAS.iter().enumerate() {
        let ts = analyze(&req.params.with_lambda(l))?.timescales;
        let (t1, t2) = (ts.tau1.value(), ts.tau2.value());
        markers.row(&join(&[l, t1, t2]))?;
        let mut series = Vec::new();
        for (name, init) in [("uniform", uniform_state()), ("ground", ground_state())] {
            let sim = simulate(&dynamics_config(req, Method::Effh, l, init))?;
            for r in &sim.rows {
                w.row(&format!("{},{name},{}", num(l), trajectory_fields(r)))?;
            }
            series.extend(population_series(name, &sim.rows, name == "ground"));
        }
        panels.push(Panel {
            title: format!("({}) lambda = {l}", (b'a' + k as u8) as char),
            x_label: "t".into(),
            y_label: "population".into(),
            x_log: true,
            series,
            markers: vec![(t1, "tau1".into()), (t2, "tau2".into())],
            ..Panel::default()
        });
    }
    Ok((panels, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_cover_figures() {
        for id in FIGURE_IDS {
            let p = preset(&format!("fig{id}")).unwrap();
            assert_eq!((p.v, p.delta, p.omega, p.gamma, p.cutoff), (1.0, 0.01, 10.0, 0.05, 1000.0));
        }
        assert!(preset("fig1").is_none());
        assert!(preset("fig9").is_none());
        assert!(preset("figure2").is_none());
    }
}
