use std::fmt::Debug;
use std::hash::Hash;

use crate::circuit::{bits_to_index, bits_to_string, Circuit};

use super::{CircuitSystem, ExplicitSystem, ModelError};

/// A finite-memory strategy read as a Moore machine: on reading a system
/// state it moves to a new internal state, and the action it plays is the
/// output of that new state.
pub trait Strategy<I: ?Sized> {
    type State: Clone + Eq + Hash + Ord + Debug;

    fn initial(&self) -> Self::State;
    fn next(&self, state: &Self::State, input: &I) -> Self::State;
    fn output(&self, state: &Self::State) -> usize;
}

/// One Moore step: `s' = next(s, v)` and the action is `output(s')`.
pub fn transducer_step<I: ?Sized, T: Strategy<I>>(
    t: &T,
    state: &T::State,
    input: &I,
) -> (T::State, usize) {
    let next = t.next(state, input);
    let action = t.output(&next);
    (next, action)
}

/// A transducer given by explicit tables over the system's state indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitTransducer {
    states: Vec<String>,
    init: usize,
    input_count: usize,
    trans: Vec<usize>,
    output: Vec<usize>,
}

impl ExplicitTransducer {
    /// `trans[s * input_count + v]` is the successor of `s` on input `v`.
    pub fn new(
        states: Vec<String>,
        init: usize,
        input_count: usize,
        trans: Vec<usize>,
        output: Vec<usize>,
    ) -> Result<Self, Vec<ModelError>> {
        let mut errors = Vec::new();
        let n = states.len();
        if n == 0 {
            errors.push(ModelError::NoStates);
        }
        if init >= n && n > 0 {
            errors.push(ModelError::IndexOutOfRange {
                what: "transducer initial state",
                index: init,
                limit: n,
            });
        }
        let mut seen = std::collections::HashSet::new();
        for s in &states {
            if !seen.insert(s) {
                errors.push(ModelError::DuplicateState(s.clone()));
            }
        }
        if trans.len() != n * input_count {
            errors.push(ModelError::CountMismatch {
                what: "transducer transition rows",
                expected: n * input_count,
                got: trans.len(),
            });
        }
        if let Some(&bad) = trans.iter().find(|&&t| t >= n) {
            errors.push(ModelError::IndexOutOfRange {
                what: "transducer transition target",
                index: bad,
                limit: n,
            });
        }
        if output.len() != n {
            errors.push(ModelError::CountMismatch {
                what: "transducer outputs",
                expected: n,
                got: output.len(),
            });
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(ExplicitTransducer {
            states,
            init,
            input_count,
            trans,
            output,
        })
    }

    /// A one-state transducer that always plays `action`.
    pub fn constant(input_count: usize, action: usize) -> Self {
        ExplicitTransducer {
            states: vec!["q0".into()],
            init: 0,
            input_count,
            trans: vec![0; input_count],
            output: vec![action],
        }
    }

    /// Checks that this transducer reads `sys` states and emits agent
    /// `agent`'s actions.
    pub fn check_against(&self, sys: &ExplicitSystem, agent: usize) -> Result<(), ModelError> {
        if agent >= sys.agent_count() {
            return Err(ModelError::IndexOutOfRange {
                what: "agent",
                index: agent,
                limit: sys.agent_count(),
            });
        }
        if self.input_count != sys.state_count() {
            return Err(ModelError::Arity {
                what: format!("transducer for agent {agent} input alphabet"),
                expected: sys.state_count(),
                got: self.input_count,
            });
        }
        if let Some(&a) = self.output.iter().find(|&&a| a >= sys.action_count(agent)) {
            return Err(ModelError::IndexOutOfRange {
                what: "transducer output action",
                index: a,
                limit: sys.action_count(agent),
            });
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn successor(&self, s: usize, v: usize) -> usize {
        self.trans[s * self.input_count + v]
    }

    pub fn output_of(&self, s: usize) -> usize {
        self.output[s]
    }
}

impl Strategy<usize> for ExplicitTransducer {
    type State = usize;

    fn initial(&self) -> usize {
        self.init
    }

    fn next(&self, state: &usize, input: &usize) -> usize {
        self.successor(*state, *input)
    }

    fn output(&self, state: &usize) -> usize {
        self.output[*state]
    }
}

/// A transducer whose memory is a bit vector updated by a circuit.
///
/// `omega` reads the transducer state bits followed by the system state bits
/// and returns the new transducer state; `output` maps transducer state bits
/// to action bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitTransducer {
    state_vars: usize,
    init: Vec<bool>,
    omega: Circuit,
    output: Circuit,
}

impl CircuitTransducer {
    pub fn new(
        state_vars: usize,
        init: Vec<bool>,
        omega: Circuit,
        output: Circuit,
    ) -> Result<Self, Vec<ModelError>> {
        let mut errors = Vec::new();
        if state_vars == 0 {
            errors.push(ModelError::NoStateVars("a circuit transducer"));
        }
        if init.len() != state_vars {
            errors.push(ModelError::Arity {
                what: "transducer initial state".into(),
                expected: state_vars,
                got: init.len(),
            });
        }
        for (what, c) in [("update circuit", &omega), ("output circuit", &output)] {
            if let Err(es) = c.validate() {
                errors.extend(es.into_iter().map(|source| ModelError::Circuit {
                    what: what.into(),
                    source,
                }));
            }
        }
        if omega.output_arity() != state_vars {
            errors.push(ModelError::Arity {
                what: "update circuit outputs".into(),
                expected: state_vars,
                got: omega.output_arity(),
            });
        }
        if omega.input_arity() < state_vars {
            errors.push(ModelError::Arity {
                what: "update circuit inputs".into(),
                expected: state_vars,
                got: omega.input_arity(),
            });
        }
        if output.input_arity() != state_vars {
            errors.push(ModelError::Arity {
                what: "output circuit inputs".into(),
                expected: state_vars,
                got: output.input_arity(),
            });
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(CircuitTransducer {
            state_vars,
            init,
            omega,
            output,
        })
    }

    pub fn check_against(&self, sys: &CircuitSystem, agent: usize) -> Result<(), ModelError> {
        if agent >= sys.action_vars().len() {
            return Err(ModelError::IndexOutOfRange {
                what: "agent",
                index: agent,
                limit: sys.action_vars().len(),
            });
        }
        if self.omega.input_arity() != self.state_vars + sys.state_vars() {
            return Err(ModelError::Arity {
                what: format!("agent {agent} update circuit inputs"),
                expected: self.state_vars + sys.state_vars(),
                got: self.omega.input_arity(),
            });
        }
        if self.output.output_arity() != sys.action_vars()[agent] {
            return Err(ModelError::Arity {
                what: format!("agent {agent} output circuit outputs"),
                expected: sys.action_vars()[agent],
                got: self.output.output_arity(),
            });
        }
        Ok(())
    }

    pub fn state_vars(&self) -> usize {
        self.state_vars
    }

    pub fn init_bits(&self) -> &[bool] {
        &self.init
    }

    pub fn omega(&self) -> &Circuit {
        &self.omega
    }

    pub fn output_circuit(&self) -> &Circuit {
        &self.output
    }

    pub fn output_bits(&self, state: &[bool]) -> Vec<bool> {
        self.output
            .eval(state)
            .expect("arity checked at construction")
    }

    pub fn state_label(state: &[bool]) -> String {
        bits_to_string(state)
    }
}

impl Strategy<Vec<bool>> for CircuitTransducer {
    type State = Vec<bool>;

    fn initial(&self) -> Vec<bool> {
        self.init.clone()
    }

    fn next(&self, state: &Vec<bool>, input: &Vec<bool>) -> Vec<bool> {
        let mut bits = Vec::with_capacity(state.len() + input.len());
        bits.extend_from_slice(state);
        bits.extend_from_slice(input);
        self.omega
            .eval(&bits)
            .expect("transducer checked against its system")
    }

    fn output(&self, state: &Vec<bool>) -> usize {
        bits_to_index(&self.output_bits(state)) as usize
    }
}

/// One strategy per agent, all in the same representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyProfile {
    Explicit(Vec<ExplicitTransducer>),
    Circuit(Vec<CircuitTransducer>),
}

impl StrategyProfile {
    pub fn len(&self) -> usize {
        match self {
            StrategyProfile::Explicit(v) => v.len(),
            StrategyProfile::Circuit(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
