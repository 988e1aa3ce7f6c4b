//! Acceptance criteria 1-14. Each test prints one PASS/FAIL line.

use rcpt_core::acceptance::{run, Settings};

fn criterion(id: u8) {
    let report = run(id, &Settings::default());
    println!("{}", report.summary_line());
    assert!(report.passed(), "{}", report.summary_line());
}

#[test]
fn criterion_01_closed_form_identity() {
    criterion(1);
}

#[test]
fn criterion_02_weak_coupling_reduction() {
    criterion(2);
}

#[test]
fn criterion_03_su3_identity() {
    criterion(3);
}

#[test]
fn criterion_04_displacement_moment() {
    criterion(4);
}

#[test]
fn criterion_05_gibbs_steady_state() {
    criterion(5);
}

#[test]
fn criterion_06_timescale_branching() {
    criterion(6);
}

#[test]
fn criterion_07_shape_suite() {
    criterion(7);
}

#[test]
fn criterion_08_limit_formulas() {
    criterion(8);
}

#[test]
fn criterion_09_scaling() {
    criterion(9);
}

#[test]
fn criterion_10_dynamics_conservation() {
    criterion(10);
}

#[test]
fn criterion_11_metastable_plateau() {
    criterion(11);
}

#[test]
fn criterion_12_cross_method_agreement() {
    criterion(12);
}

#[test]
fn criterion_13_initial_state_independence() {
    criterion(13);
}

#[test]
fn criterion_14_rc_truncation() {
    criterion(14);
}
