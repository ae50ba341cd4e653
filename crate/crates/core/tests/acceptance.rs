//! One test per acceptance criterion. Each prints a PASS/FAIL line with the
//! failing checks before asserting; run with `--nocapture` to see them.

use inelastic_kfp::reproduce::{criterion, Scale};

fn verify(id: u8) {
    let report = criterion(id, Scale::Full).unwrap_or_else(|e| panic!("criterion {id} could not run: {e}"));
    println!("{}", report.line());
    assert!(report.passed, "criterion {id} failed");
}

#[test]
fn criterion_01_exponent_identities() {
    verify(1);
}

#[test]
fn criterion_02_moment_integral() {
    verify(2);
}

#[test]
fn criterion_03_flux_constant() {
    verify(3);
}

#[test]
fn criterion_04_vanishing_alpha_flux() {
    verify(4);
}

#[test]
fn criterion_05_c_star_agreement() {
    verify(5);
}

#[test]
fn criterion_06_collapse_dichotomy() {
    verify(6);
}

#[test]
fn criterion_07_hitting_scale_invariance() {
    verify(7);
}

#[test]
fn criterion_08_lattice_continuum_limits() {
    verify(8);
}

#[test]
fn criterion_09_trapping_versus_nontrapping() {
    verify(9);
}

#[test]
fn criterion_10_partial_trapping_relation() {
    verify(10);
}

#[test]
fn criterion_11_elastic_wall_consistency() {
    verify(11);
}

#[test]
fn criterion_12_special_function_battery() {
    verify(12);
}
