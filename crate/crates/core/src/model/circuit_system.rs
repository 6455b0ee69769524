use crate::circuit::{bits_to_string, index_to_bits, Circuit};

use super::{ModelError, MultiAgentSystem, MAX_AGENTS};

/// Upper bound on action variables per agent, so actions fit in an index.
pub const MAX_ACTION_VARS: usize = 24;

/// A system whose states are bit vectors and whose transition function and
/// goals are combinational circuits.
///
/// `phi` reads the state variables followed by agent 0's action variables,
/// then agent 1's, and so on; it outputs the next state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitSystem {
    state_vars: usize,
    init: Vec<bool>,
    action_vars: Vec<usize>,
    goals: Vec<Circuit>,
    phi: Circuit,
}

impl CircuitSystem {
    pub fn new(
        state_vars: usize,
        init: Vec<bool>,
        action_vars: Vec<usize>,
        goals: Vec<Circuit>,
        phi: Circuit,
    ) -> Result<Self, Vec<ModelError>> {
        let mut errors = Vec::new();
        if state_vars == 0 {
            errors.push(ModelError::NoStateVars("a circuit system"));
        }
        if init.len() != state_vars {
            errors.push(ModelError::Arity {
                what: "initial state".into(),
                expected: state_vars,
                got: init.len(),
            });
        }
        let k = action_vars.len();
        if k == 0 || k > MAX_AGENTS {
            errors.push(ModelError::AgentCount(k));
        }
        for (i, &n) in action_vars.iter().enumerate() {
            if n == 0 {
                errors.push(ModelError::NoActionVars(i));
            }
            if n > MAX_ACTION_VARS {
                errors.push(ModelError::TooManyVars {
                    what: format!("agent {i}'s action"),
                    got: n,
                    max: MAX_ACTION_VARS,
                });
            }
        }
        if goals.len() != k {
            errors.push(ModelError::CountMismatch {
                what: "goal circuits",
                expected: k,
                got: goals.len(),
            });
        }
        let mut check = |what: String, c: &Circuit, inputs: usize, outputs: usize| {
            if let Err(es) = c.validate() {
                errors.extend(es.into_iter().map(|source| ModelError::Circuit {
                    what: what.clone(),
                    source,
                }));
            }
            if c.input_arity() != inputs {
                errors.push(ModelError::Arity {
                    what: format!("{what} inputs"),
                    expected: inputs,
                    got: c.input_arity(),
                });
            }
            if c.output_arity() != outputs {
                errors.push(ModelError::Arity {
                    what: format!("{what} outputs"),
                    expected: outputs,
                    got: c.output_arity(),
                });
            }
        };
        for (i, g) in goals.iter().enumerate() {
            check(format!("goal circuit {i}"), g, state_vars, 1);
        }
        let total_action: usize = action_vars.iter().sum();
        check(
            "transition circuit".into(),
            &phi,
            state_vars + total_action,
            state_vars,
        );
        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(CircuitSystem {
            state_vars,
            init,
            action_vars,
            goals,
            phi,
        })
    }

    pub fn state_vars(&self) -> usize {
        self.state_vars
    }

    pub fn init(&self) -> &[bool] {
        &self.init
    }

    pub fn action_vars(&self) -> &[usize] {
        &self.action_vars
    }

    pub fn total_action_vars(&self) -> usize {
        self.action_vars.iter().sum()
    }

    pub fn goal_circuit(&self, agent: usize) -> &Circuit {
        &self.goals[agent]
    }

    pub fn goal_circuits(&self) -> &[Circuit] {
        &self.goals
    }

    pub fn phi(&self) -> &Circuit {
        &self.phi
    }

    /// Next state from concatenated action bits (agent 0 first).
    pub fn step_bits(&self, state: &[bool], action_bits: &[bool]) -> Vec<bool> {
        let mut input = Vec::with_capacity(state.len() + action_bits.len());
        input.extend_from_slice(state);
        input.extend_from_slice(action_bits);
        self.phi
            .eval(&input)
            .expect("arity checked at construction")
    }

    /// Concatenated action bits of a decision given as action indices.
    pub fn decision_bits(&self, decision: &[usize]) -> Vec<bool> {
        decision
            .iter()
            .zip(&self.action_vars)
            .flat_map(|(&a, &w)| index_to_bits(a as u128, w))
            .collect()
    }

    pub fn goal_holds(&self, agent: usize, state: &[bool]) -> bool {
        self.goals[agent]
            .eval(state)
            .expect("arity checked at construction")[0]
    }
}

impl MultiAgentSystem for CircuitSystem {
    type State = Vec<bool>;

    fn agent_count(&self) -> usize {
        self.action_vars.len()
    }

    fn action_count(&self, agent: usize) -> usize {
        1 << self.action_vars[agent]
    }

    fn initial_state(&self) -> Vec<bool> {
        self.init.clone()
    }

    fn successor(&self, state: &Vec<bool>, decision: &[usize]) -> Vec<bool> {
        self.step_bits(state, &self.decision_bits(decision))
    }

    fn in_goal(&self, agent: usize, state: &Vec<bool>) -> bool {
        self.goal_holds(agent, state)
    }

    fn state_label(&self, state: &Vec<bool>) -> String {
        bits_to_string(state)
    }

    fn action_label(&self, agent: usize, action: usize) -> String {
        bits_to_string(&index_to_bits(action as u128, self.action_vars[agent]))
    }
}
