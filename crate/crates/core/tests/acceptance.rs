//! End-to-end verification battery: every structural law the crate claims,
//! run at a fixed seed with one pass/fail line per criterion.

use cliffinv::suite::{self, CriterionResult};

const SEED: u64 = 42;

fn report(result: CriterionResult) {
    let status = if result.passed() { "PASS" } else { "FAIL" };
    println!(
        "{status} {name}: {checks} checks, {failures} failures, {ms} ms",
        name = result.name,
        checks = result.checks,
        failures = result.failures.len(),
        ms = result.elapsed_ms,
    );
    for f in result.failures.iter().take(10) {
        println!("       {f}");
    }
    assert!(result.passed(), "criterion {} failed", result.name);
}

#[test]
fn criterion_1_volume_element_laws() {
    report(suite::criterion_volume_element(SEED));
}

#[test]
fn criterion_2_type_oracle() {
    report(suite::criterion_type_oracle(SEED));
}

#[test]
fn criterion_3_type_tables() {
    report(suite::criterion_type_tables(SEED));
}

#[test]
fn criterion_4_decomposition_certificates() {
    report(suite::criterion_decompositions(SEED));
}

#[test]
fn criterion_5_even_universal_property() {
    report(suite::criterion_universal_property(SEED));
}

#[test]
fn criterion_6_quaternion_realizations() {
    report(suite::criterion_quaternion_realizations(SEED));
}

#[test]
fn criterion_7_multiquaternion_synthesis() {
    report(suite::criterion_multiquaternion_synthesis(SEED));
}

#[test]
fn criterion_8_second_kind_chains() {
    report(suite::criterion_second_kind(SEED));
}

#[test]
fn criterion_9_table_blade_oracle() {
    report(suite::criterion_table_oracle(SEED));
}
