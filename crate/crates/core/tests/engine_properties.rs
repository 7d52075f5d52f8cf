//! Containment and inclusion monotonicity, 10^4 cases each.

mod support;

use support::suites;

#[test]
fn containment() {
    suites::containment(10_000, 1).unwrap();
}

#[test]
fn inclusion_monotonicity() {
    suites::inclusion_monotonicity(10_000, 2).unwrap();
}
