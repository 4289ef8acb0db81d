//! Acceptance suite: runs every validation criterion at its nominal
//! tolerance and prints one pass/fail line per criterion.
//!
//! Run with `cargo test -p ctqw-core --test acceptance -- --nocapture`
//! to see the lines; the same checks back the CLI `validate` subcommand.

use ctqw_core::validate;

const CRITERIA: [(u32, &str); 12] = [
    (1, "defect-site peak, position defect on the starting node"),
    (2, "defect-site peak, position defect one node away"),
    (3, "two-bound-state projections beside the defect"),
    (4, "bound-state counting across the defect-strength grids"),
    (5, "out-of-band quadratic roots rejected by the branch test"),
    (6, "spectral vs oracle backend equivalence grid"),
    (7, "disconnected defect traps the walker"),
    (8, "distributions symmetric under alpha -> -alpha"),
    (9, "free-line spreading slope sqrt(2) gamma"),
    (10, "spreading-speed ordering across defect placements"),
    (
        11,
        "norm, completeness, orthonormality, quadrature stability",
    ),
    (12, "two-bound-state interference period and envelope"),
];

#[test]
fn acceptance_criteria() {
    let report = validate::run().expect("validation suite runs");
    let mut all_ok = true;
    for (id, label) in CRITERIA {
        let checks: Vec<_> = report.checks.iter().filter(|c| c.criterion == id).collect();
        assert!(!checks.is_empty(), "criterion {id} produced no checks");
        let ok = checks.iter().all(|c| c.passed);
        println!(
            "criterion {id:2} [{}] {label}",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            for c in checks.iter().filter(|c| !c.passed) {
                println!(
                    "    FAILED {}: measured {:.12e}, target {:.12e}, tolerance {:.3e}",
                    c.name, c.measured, c.target, c.tolerance
                );
            }
            all_ok = false;
        }
    }
    assert!(all_ok, "one or more acceptance criteria failed");
}
