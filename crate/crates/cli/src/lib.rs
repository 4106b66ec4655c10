//! Configuration, sweep evaluation and self-tests behind the `secrecy-lab`
//! command.

pub mod config;
pub mod sweep;
pub mod validation;

use validation::{run_all, Budget, Criterion, Numerics};

/// Runs the invariant suites and renders one block per criterion.
pub fn selftest(full: bool, num: &Numerics) -> (String, bool) {
    let budget = if full { Budget::full() } else { Budget::quick() };
    report(&run_all(num, &budget))
}

pub fn report(criteria: &[Criterion]) -> (String, bool) {
    let mut out = String::new();
    for c in criteria {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    let passed = criteria.iter().all(Criterion::passed);
    let failed: Vec<&str> = criteria.iter().filter(|c| !c.passed()).map(|c| c.id).collect();
    if passed {
        out.push_str("selftest: all criteria passed\n");
    } else {
        out.push_str(&format!("selftest: failed criteria: {}\n", failed.join(", ")));
    }
    (out, passed)
}
