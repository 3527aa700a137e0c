//! End-to-end acceptance gate: one printed line per criterion, with the
//! tolerances pinned inside the suite module; failures are collected and
//! reported together so every criterion always runs.

use conedido::suite::acceptance_suite;

#[test]
fn acceptance() {
    let results = acceptance_suite();
    let mut failures = Vec::new();
    for r in &results {
        println!("{}", r.line());
        if !r.passed {
            failures.push(format!("{} ({}): {}", r.index, r.name, r.detail));
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
