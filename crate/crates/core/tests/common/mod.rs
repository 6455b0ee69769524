#![allow(dead_code)]

use std::path::PathBuf;

use wnash::gadgets::{AltTM, DetTM};
use wnash::io::{parse_atm, parse_cmas, parse_dtm, parse_emas};
use wnash::{AgentSet, CircuitSystem, ExplicitSystem};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name))
        .unwrap_or_else(|e| panic!("reading fixture {name}: {e}"))
}

pub fn sys1() -> ExplicitSystem {
    parse_emas(&fixture("sys1.emas")).unwrap()
}

pub fn sys1_circuit() -> CircuitSystem {
    parse_cmas(&fixture("sys1.cmas")).unwrap()
}

pub fn dtm(name: &str) -> DetTM {
    parse_dtm(&fixture(&format!("{name}.dtm"))).unwrap()
}

pub fn atm(name: &str) -> AltTM {
    parse_atm(&fixture(&format!("{name}.atm"))).unwrap()
}

pub fn set(agents: &[usize]) -> AgentSet {
    let mut s = AgentSet::empty();
    for &i in agents {
        s.insert(i);
    }
    s
}
