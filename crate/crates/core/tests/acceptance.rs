//! Runs every acceptance criterion and prints one line per criterion.

use cdh::analysis::acceptance::{criteria, run_criterion};

#[test]
fn acceptance() {
    let outcomes: Vec<_> = criteria().iter().map(run_criterion).collect();
    println!();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| format!("{} {}", o.id, o.name))
        .collect();
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
