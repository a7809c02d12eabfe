//! The acceptance gate: runs every criterion at its stated tolerance and
//! prints one pass/fail line per criterion.

use ltot_core::acceptance::run_selftest;

const SUITE_SEED: u64 = 0x4c54_4f54; // "LTOT"

#[test]
fn acceptance_criteria() {
    let outcome = run_selftest(SUITE_SEED);
    for criterion in &outcome.criteria {
        println!("{}", criterion.line());
    }
    let failed: Vec<_> = outcome
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.id)
        .collect();
    assert!(
        outcome.passed(),
        "failed criteria: {failed:?} (see lines above)"
    );
}
