//! Acceptance gate: every release-blocking property as one test each.
//! Each test prints its pass/fail line (visible with --nocapture) and
//! asserts the check passed at its stated tolerance.

use std::sync::OnceLock;

use htype::verify::{
    check_bracket_generating, check_char_poly_structure, check_closed_form_vs_oracle,
    check_conservation, check_eigenvalue_parity, check_generator_families, check_left_translation,
    check_octonion_char_polys, check_oracle_convergence, check_projection_identities, oracle_sweep,
    OracleSweep,
};

/// One integrator sweep shared by the agreement and conservation criteria:
/// 50 random cases at 100k steps over [0, 1].
fn sweep() -> &'static OracleSweep {
    static SWEEP: OnceLock<OracleSweep> = OnceLock::new();
    SWEEP.get_or_init(|| oracle_sweep(0xACCE97, 50, 100_000))
}

#[test]
fn criterion_01_octonion_characteristic_polynomials() {
    let result = check_octonion_char_polys(101);
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_02_eigenvalue_parity_and_block_counts() {
    let result = check_eigenvalue_parity(102);
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_03_closed_form_matches_integrator() {
    let result = check_closed_form_vs_oracle(sweep());
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_04_momentum_and_speed_conservation() {
    let result = check_conservation(sweep());
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_05_projection_identities_per_block() {
    let result = check_projection_identities(105);
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_06_characteristic_polynomial_structure() {
    let result = check_char_poly_structure(106);
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_07_generator_families_and_axis_spectra() {
    let result = check_generator_families(false);
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_08_left_translation_invariance() {
    let result = check_left_translation(108);
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_09_bracket_generating_frame() {
    let result = check_bracket_generating(109);
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_10_integrator_convergence_order() {
    let result = check_oracle_convergence(110);
    println!("{result}");
    assert!(result.passed, "{result}");
}
