//! System representations, strategy transducers, traces and unfolding.

mod circuit_system;
mod explicit;
mod trace;
mod transducer;
mod unfold;

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::circuit::CircuitError;

pub use circuit_system::CircuitSystem;
pub use explicit::{ExplicitSystem, SystemDescription, TransitionRow};
pub use trace::{winning_set, LassoTrace};
pub use transducer::{
    transducer_step, CircuitTransducer, ExplicitTransducer, Strategy, StrategyProfile,
};
pub use unfold::{reachable_fragment, unfold, unfold_transducer, DEFAULT_ROW_CAP};

/// Largest supported number of agents (agent sets are 64-bit masks).
pub const MAX_AGENTS: usize = 64;

/// A set of agent indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AgentSet(u64);

impl AgentSet {
    pub const fn empty() -> Self {
        AgentSet(0)
    }

    /// All agents `0..k`.
    pub fn full(k: usize) -> Self {
        assert!(k <= MAX_AGENTS);
        if k == 64 {
            AgentSet(u64::MAX)
        } else {
            AgentSet((1u64 << k) - 1)
        }
    }

    pub const fn from_bits(bits: u64) -> Self {
        AgentSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::empty();
        s.insert(i);
        s
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_AGENTS && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < MAX_AGENTS, "agent index {i} too large");
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        if i < MAX_AGENTS {
            self.0 &= !(1 << i);
        }
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        AgentSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        AgentSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        AgentSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending agent indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_AGENTS).filter(move |&i| self.contains(i))
    }

    /// Every subset of `0..k`, in increasing bitmask order.
    pub fn all_subsets(k: usize) -> impl Iterator<Item = AgentSet> {
        assert!(k < MAX_AGENTS);
        (0..1u64 << k).map(AgentSet)
    }

    /// Comma-separated indices, or `none` for the empty set.
    pub fn to_list_string(self) -> String {
        if self.is_empty() {
            return "none".to_string();
        }
        self.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the format produced by [`AgentSet::to_list_string`]. Indices may
    /// come in any order but must not repeat.
    pub fn parse_list(text: &str) -> Result<Self, String> {
        let text = text.trim();
        if text == "none" {
            return Ok(Self::empty());
        }
        if text.is_empty() {
            return Err("empty agent list (use `none` for the empty set)".into());
        }
        let mut set = Self::empty();
        for part in text.split(',') {
            let i: usize = part
                .trim()
                .parse()
                .map_err(|_| format!("`{part}` is not an agent index"))?;
            if i >= MAX_AGENTS {
                return Err(format!("agent index {i} too large"));
            }
            if set.contains(i) {
                return Err(format!("agent {i} listed twice"));
            }
            set.insert(i);
        }
        Ok(set)
    }
}

impl FromIterator<usize> for AgentSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = AgentSet::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("no transition row for state {state} under decision ({})", decision.join(","))]
    MissingTransitionRow {
        state: String,
        decision: Vec<String>,
    },
    #[error("duplicate transition row for state {state} under decision ({})", decision.join(","))]
    DuplicateRow {
        state: String,
        decision: Vec<String>,
    },
    #[error("agent {0} needs at least two actions")]
    SingletonActionSet(usize),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{action}` for agent {agent}")]
    UnknownAction { agent: usize, action: String },
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("action `{action}` declared twice for agent {agent}")]
    DuplicateAction { agent: usize, action: String },
    #[error("system has no states")]
    NoStates,
    #[error("system needs between 1 and {MAX_AGENTS} agents, got {0}")]
    AgentCount(usize),
    #[error("expected {expected} {what}, got {got}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("{what}: expected arity {expected}, got {got}")]
    Arity {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("{what}: {source}")]
    Circuit {
        what: String,
        #[source]
        source: CircuitError,
    },
    #[error("agent {0} has no action variables")]
    NoActionVars(usize),
    #[error("{0} must have at least one state variable")]
    NoStateVars(&'static str),
    #[error("{what} has {got} variables, more than the supported {max}")]
    TooManyVars {
        what: String,
        got: usize,
        max: usize,
    },
    #[error("trace steps from {from} to {to} at position {position}, which no decision allows")]
    NotATrace {
        position: usize,
        from: String,
        to: String,
    },
    #[error("trace does not start at the initial state")]
    TraceStart,
    #[error("lasso cycle is empty")]
    EmptyCycle,
    #[error("needs {required} table rows but the cap is {cap}")]
    CapExceeded { required: u128, cap: u128 },
}

/// Read-only view of a deterministic concurrent system, shared by the
/// explicit and circuit representations.
pub trait MultiAgentSystem {
    type State: Clone + Eq + Hash + Ord + fmt::Debug;

    fn agent_count(&self) -> usize;
    fn action_count(&self, agent: usize) -> usize;
    fn initial_state(&self) -> Self::State;
    /// Successor under a decision given as one action index per agent.
    fn successor(&self, state: &Self::State, decision: &[usize]) -> Self::State;
    fn in_goal(&self, agent: usize, state: &Self::State) -> bool;
    fn state_label(&self, state: &Self::State) -> String;
    fn action_label(&self, agent: usize, action: usize) -> String;

    /// Agents whose goal contains `state`.
    fn goals_at(&self, state: &Self::State) -> AgentSet {
        (0..self.agent_count())
            .filter(|&i| self.in_goal(i, state))
            .collect()
    }

    fn decision_label(&self, decision: &[usize]) -> String {
        decision
            .iter()
            .enumerate()
            .map(|(i, &a)| self.action_label(i, a))
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agent_set_basics() {
        let s: AgentSet = [2, 0].into_iter().collect();
        assert!(s.contains(0) && s.contains(2) && !s.contains(1));
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_string(), "{0,2}");
        assert_eq!(s.to_list_string(), "0,2");
        assert_eq!(AgentSet::empty().to_list_string(), "none");
        assert_eq!(AgentSet::full(3).difference(s), AgentSet::singleton(1));
    }

    #[test]
    fn agent_set_parse() {
        assert_eq!(AgentSet::parse_list("0,2"), Ok(AgentSet::from_bits(0b101)));
        assert_eq!(AgentSet::parse_list("2,0"), Ok(AgentSet::from_bits(0b101)));
        assert_eq!(AgentSet::parse_list("none"), Ok(AgentSet::empty()));
        assert!(AgentSet::parse_list("0,0").is_err());
        assert!(AgentSet::parse_list("x").is_err());
        assert!(AgentSet::parse_list("").is_err());
    }

    #[test]
    fn all_subsets_count() {
        assert_eq!(AgentSet::all_subsets(3).count(), 8);
    }
}
