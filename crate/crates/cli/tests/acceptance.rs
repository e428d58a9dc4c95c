//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test -p occlusion-cli --test acceptance`
//! (`-- --nocapture` to see the lines as they complete).

use occlusion_cli::experiments::{self, CriterionOutcome};

fn check(number: usize, outcome: CriterionOutcome) {
    println!(
        "criterion {number} ({}): {} - {}",
        outcome.title,
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.detail
    );
    assert!(
        outcome.passed,
        "criterion {number} ({}) failed: {}",
        outcome.title, outcome.detail
    );
}

#[test]
fn criterion_01_view_fidelity() {
    check(1, experiments::run_named("view-fidelity", None, None).unwrap());
}

#[test]
fn criterion_02_ws_probability() {
    check(2, experiments::run_named("ws-probability", None, None).unwrap());
}

#[test]
fn criterion_03_marker_learning() {
    check(3, experiments::run_named("marker-learning", None, None).unwrap());
}

#[test]
fn criterion_04_two_object_learning() {
    check(4, experiments::run_named("two-object-learning", None, None).unwrap());
}

#[test]
fn criterion_05_k_object_learning() {
    check(5, experiments::run_named("k-object-learning", None, None).unwrap());
}

#[test]
fn criterion_06_dp_minimality() {
    check(6, experiments::run_named("dp-oracle", None, None).unwrap());
}

#[test]
fn criterion_07_greedy_coverage() {
    check(7, experiments::run_named("greedy-coverage", None, None).unwrap());
}

#[test]
fn criterion_08_noisy_robustness() {
    check(8, experiments::run_named("noisy-robustness", None, None).unwrap());
}

#[test]
fn criterion_09_breaker_fixtures() {
    check(9, experiments::run_named("breaker-fixtures", None, None).unwrap());
}

#[test]
fn criterion_10_hardness_reduction() {
    check(10, experiments::run_named("hardness-reduction", None, None).unwrap());
}
