//! Shared fixtures for unit tests.

use crate::model::{ExplicitSystem, ExplicitTransducer, SystemDescription, TransitionRow};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Three states; reaching s1 needs both `a` and `x`, any `b` leads to s2.
pub fn sys1_description() -> SystemDescription {
    let mut rows = Vec::new();
    let table = [
        ("s0", ["s1", "s0", "s2", "s2"]),
        ("s1", ["s1"; 4]),
        ("s2", ["s2"; 4]),
    ];
    for (v, targets) in table {
        for (d, t) in targets.iter().enumerate() {
            rows.push(TransitionRow {
                state: v.into(),
                decision: vec![["a", "b"][d / 2].into(), ["x", "y"][d % 2].into()],
                target: t.to_string(),
            });
        }
    }
    SystemDescription {
        states: names(&["s0", "s1", "s2"]),
        init: "s0".into(),
        actions: vec![names(&["a", "b"]), names(&["x", "y"])],
        goals: vec![names(&["s1"]), names(&["s2"])],
        rows,
    }
}

pub fn sys1() -> ExplicitSystem {
    sys1_description().build().unwrap()
}

/// One-state transducers for SYS1 where agent 0 plays `a0` and agent 1 plays `a1`.
pub fn constant_profile(sys: &ExplicitSystem, a0: usize, a1: usize) -> Vec<ExplicitTransducer> {
    [a0, a1]
        .iter()
        .map(|&a| ExplicitTransducer::constant(sys.state_count(), a))
        .collect()
}
