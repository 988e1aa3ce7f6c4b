//! Trajectory-level properties of the three model configurations.

use rcpt_core::acceptance::relaxation_edges;
use rcpt_core::redfield::{
    ground_state, simulate, steady, uniform_state, GeneratorKind, Method, ObservableRow, SimulationConfig,
};
use rcpt_core::timescales::analyze;
use rcpt_core::ModelParams;

fn paper(lambda: f64) -> ModelParams {
    ModelParams {
        lambda,
        ..ModelParams::default()
    }
}

fn run(method: Method, generator: GeneratorKind, lambda: f64) -> Vec<ObservableRow> {
    let mut c = SimulationConfig::new(method, paper(lambda), uniform_state());
    c.generator = generator;
    simulate(&c).unwrap().rows
}

fn pops(r: &ObservableRow) -> [f64; 3] {
    [r.rho11, r.rho22, r.rho33]
}

#[test]
fn weak_coupling_methods_agree() {
    let uw = run(Method::Uw, GeneratorKind::Redfield, 0.1);
    let rc = run(Method::Rc, GeneratorKind::Redfield, 0.1);
    let effh = run(Method::Effh, GeneratorKind::Redfield, 0.1);
    let mut worst = 0.0_f64;
    for ((a, b), c) in uw.iter().zip(&rc).zip(&effh) {
        for k in 0..3 {
            let v = [pops(a)[k], pops(b)[k], pops(c)[k]];
            let spread = v.iter().copied().fold(f64::NEG_INFINITY, f64::max) - v.iter().copied().fold(f64::INFINITY, f64::min);
            worst = worst.max(spread);
        }
    }
    assert!(worst < 0.02, "population spread {worst}");
    for rows in [&uw, &rc, &effh] {
        let coh = rows.iter().map(|r| r.re_rho32.hypot(r.im_rho32)).fold(0.0, f64::max);
        assert!(coh < 0.02, "weak-coupling coherence {coh}");
    }
}

#[test]
fn redfield_and_secular_agree_at_strong_coupling() {
    let red = run(Method::Effh, GeneratorKind::Redfield, 5.0);
    let sec = run(Method::Effh, GeneratorKind::SecularLindblad, 5.0);
    let worst = red
        .iter()
        .zip(&sec)
        .flat_map(|(a, b)| (0..3).map(move |k| (pops(a)[k] - pops(b)[k]).abs()))
        .fold(0.0, f64::max);
    assert!(worst < 0.01, "{worst}");
    let min_eig = sec.iter().map(|r| r.min_eig).fold(f64::INFINITY, f64::min);
    assert!(min_eig >= -1e-9, "{min_eig}");
}

#[test]
fn redfield_negativity_stays_small() {
    for l in [0.1, 1.0, 3.0, 5.0] {
        for m in [Method::Uw, Method::Effh] {
            let rows = run(m, GeneratorKind::Redfield, l);
            let min_eig = rows.iter().map(|r| r.min_eig).fold(f64::INFINITY, f64::min);
            assert!(min_eig > -1e-3, "{m:?} lambda={l}: {min_eig}");
        }
    }
}

#[test]
fn weak_coupling_relaxes_in_one_visible_stage() {
    let rows = run(Method::Effh, GeneratorKind::SecularLindblad, 0.1);
    let times: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let p: Vec<[f64; 3]> = rows.iter().map(pops).collect();
    assert_eq!(relaxation_edges(&times, &p).len(), 1);
    let strong = run(Method::Effh, GeneratorKind::SecularLindblad, 3.0);
    let p: Vec<[f64; 3]> = strong.iter().map(pops).collect();
    assert_eq!(relaxation_edges(&times, &p).len(), 2);
}

#[test]
fn trajectories_end_at_the_steady_state() {
    let p = paper(3.0);
    let tau2 = analyze(&p).unwrap().timescales.tau2.value();
    let mut c = SimulationConfig::new(Method::Effh, p, ground_state());
    c.time_grid = vec![0.0, 1e3 * tau2];
    let last = *simulate(&c).unwrap().rows.last().unwrap();
    let ss = steady(&c).unwrap().row;
    for (a, b) in pops(&last).iter().zip(pops(&ss)) {
        assert!((a - b).abs() < 1e-8);
    }
    assert!((last.re_rho32 - ss.re_rho32).abs() < 1e-8);
}

#[test]
fn strong_coupling_steady_state_keeps_coherence() {
    let ss = steady(&SimulationConfig::new(Method::Effh, paper(5.0), uniform_state())).unwrap();
    assert!(ss.row.re_rho32.hypot(ss.row.im_rho32) > 0.05);
    assert!(ss.full.residual < 1e-10);
}
