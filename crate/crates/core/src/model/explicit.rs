use std::collections::HashMap;

use super::{AgentSet, ModelError, MultiAgentSystem, MAX_AGENTS};

/// A deterministic concurrent system stored as a dense transition table.
///
/// States and actions are referred to by index; names are kept for display
/// and serialization. A decision (one action per agent) is encoded as a
/// mixed-radix number with agent 0 most significant, so decision indices
/// enumerate decisions in lexicographic declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitSystem {
    states: Vec<String>,
    state_index: HashMap<String, usize>,
    init: usize,
    actions: Vec<Vec<String>>,
    goals: Vec<Vec<bool>>,
    strides: Vec<usize>,
    decision_count: usize,
    table: Vec<usize>,
}

impl ExplicitSystem {
    /// Builds a system from index data. `goals[i]` lists the states of agent
    /// i's goal; `table[v * |D| + d]` is the successor of state v under
    /// decision index d.
    pub fn from_table(
        states: Vec<String>,
        init: usize,
        actions: Vec<Vec<String>>,
        goals: Vec<Vec<usize>>,
        table: Vec<usize>,
    ) -> Result<Self, Vec<ModelError>> {
        let mut errors = Vec::new();
        if states.is_empty() {
            errors.push(ModelError::NoStates);
        }
        let k = actions.len();
        if k == 0 || k > MAX_AGENTS {
            errors.push(ModelError::AgentCount(k));
        }
        let mut state_index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if state_index.insert(s.clone(), i).is_some() {
                errors.push(ModelError::DuplicateState(s.clone()));
            }
        }
        if init >= states.len() && !states.is_empty() {
            errors.push(ModelError::IndexOutOfRange {
                what: "initial state",
                index: init,
                limit: states.len(),
            });
        }
        for (i, acts) in actions.iter().enumerate() {
            if acts.len() < 2 {
                errors.push(ModelError::SingletonActionSet(i));
            }
            let mut seen = std::collections::HashSet::new();
            for a in acts {
                if !seen.insert(a) {
                    errors.push(ModelError::DuplicateAction {
                        agent: i,
                        action: a.clone(),
                    });
                }
            }
        }
        if goals.len() != k {
            errors.push(ModelError::CountMismatch {
                what: "goal sets",
                expected: k,
                got: goals.len(),
            });
        }
        let mut goal_masks = Vec::with_capacity(goals.len());
        for g in &goals {
            let mut mask = vec![false; states.len()];
            for &v in g {
                if v < states.len() {
                    mask[v] = true;
                } else {
                    errors.push(ModelError::IndexOutOfRange {
                        what: "goal state",
                        index: v,
                        limit: states.len(),
                    });
                }
            }
            goal_masks.push(mask);
        }
        let mut strides = vec![1usize; k];
        let mut decision_count = 1usize;
        for i in (0..k).rev() {
            strides[i] = decision_count;
            decision_count = decision_count.saturating_mul(actions[i].len().max(1));
        }
        let expected_rows = states.len().saturating_mul(decision_count);
        if table.len() != expected_rows {
            errors.push(ModelError::CountMismatch {
                what: "transition rows",
                expected: expected_rows,
                got: table.len(),
            });
        }
        for &t in &table {
            if t >= states.len() {
                errors.push(ModelError::IndexOutOfRange {
                    what: "transition target",
                    index: t,
                    limit: states.len(),
                });
                break;
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(ExplicitSystem {
            states,
            state_index,
            init,
            actions,
            goals: goal_masks,
            strides,
            decision_count,
            table,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn agent_count(&self) -> usize {
        self.actions.len()
    }

    pub fn decision_count(&self) -> usize {
        self.decision_count
    }

    pub fn action_count(&self, agent: usize) -> usize {
        self.actions[agent].len()
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn state_name(&self, v: usize) -> &str {
        &self.states[v]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn action_name(&self, agent: usize, a: usize) -> &str {
        &self.actions[agent][a]
    }

    pub fn action_names(&self, agent: usize) -> &[String] {
        &self.actions[agent]
    }

    pub fn action_id(&self, agent: usize, name: &str) -> Option<usize> {
        self.actions[agent].iter().position(|a| a == name)
    }

    pub fn in_goal(&self, agent: usize, v: usize) -> bool {
        self.goals[agent][v]
    }

    /// States of agent `agent`'s goal, ascending.
    pub fn goal_states(&self, agent: usize) -> Vec<usize> {
        (0..self.states.len())
            .filter(|&v| self.goals[agent][v])
            .collect()
    }

    /// Agents whose goal contains `v`.
    pub fn goals_at(&self, v: usize) -> AgentSet {
        (0..self.agent_count())
            .filter(|&i| self.goals[i][v])
            .collect()
    }

    /// Encodes one action per agent as a decision index.
    pub fn decision_index(&self, decision: &[usize]) -> usize {
        debug_assert_eq!(decision.len(), self.agent_count());
        decision
            .iter()
            .zip(&self.strides)
            .map(|(&a, &s)| a * s)
            .sum()
    }

    pub fn decision(&self, index: usize) -> Vec<usize> {
        (0..self.agent_count())
            .map(|i| self.component(index, i))
            .collect()
    }

    /// Action of agent `agent` within decision `index`.
    pub fn component(&self, index: usize, agent: usize) -> usize {
        index / self.strides[agent] % self.actions[agent].len()
    }

    /// The decision `index` with agent `agent`'s component replaced by `action`.
    pub fn with_component(&self, index: usize, agent: usize, action: usize) -> usize {
        let old = self.component(index, agent);
        index - old * self.strides[agent] + action * self.strides[agent]
    }

    /// Successor of `v` under decision index `d`.
    pub fn step(&self, v: usize, d: usize) -> usize {
        self.table[v * self.decision_count + d]
    }

    /// Successor of `v` under a decision given component-wise.
    pub fn step_decision(&self, v: usize, decision: &[usize]) -> usize {
        self.step(v, self.decision_index(decision))
    }

    /// Successors of `v` for every decision index, in order.
    pub fn row(&self, v: usize) -> &[usize] {
        &self.table[v * self.decision_count..(v + 1) * self.decision_count]
    }

    pub fn decision_name(&self, d: usize) -> String {
        (0..self.agent_count())
            .map(|i| self.actions[i][self.component(d, i)].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses a comma-separated decision such as `a,x`.
    pub fn parse_decision(&self, text: &str) -> Option<usize> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != self.agent_count() {
            return None;
        }
        let comps: Option<Vec<usize>> = parts
            .iter()
            .enumerate()
            .map(|(i, p)| self.action_id(i, p))
            .collect();
        comps.map(|c| self.decision_index(&c))
    }

    /// States reachable from the initial state, ascending.
    pub fn reachable_states(&self) -> Vec<usize> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.init];
        seen[self.init] = true;
        while let Some(v) = stack.pop() {
            for &w in self.row(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..self.state_count()).filter(|&v| seen[v]).collect()
    }

    /// Named form of this system with rows in canonical order.
    pub fn describe(&self) -> SystemDescription {
        let k = self.agent_count();
        let mut rows = Vec::with_capacity(self.table.len());
        for v in 0..self.state_count() {
            for d in 0..self.decision_count {
                rows.push(TransitionRow {
                    state: self.states[v].clone(),
                    decision: (0..k)
                        .map(|i| self.actions[i][self.component(d, i)].clone())
                        .collect(),
                    target: self.states[self.step(v, d)].clone(),
                });
            }
        }
        SystemDescription {
            states: self.states.clone(),
            init: self.states[self.init].clone(),
            actions: self.actions.clone(),
            goals: (0..k)
                .map(|i| {
                    self.goal_states(i)
                        .into_iter()
                        .map(|v| self.states[v].clone())
                        .collect()
                })
                .collect(),
            rows,
        }
    }
}

impl MultiAgentSystem for ExplicitSystem {
    type State = usize;

    fn agent_count(&self) -> usize {
        self.actions.len()
    }

    fn action_count(&self, agent: usize) -> usize {
        self.actions[agent].len()
    }

    fn initial_state(&self) -> usize {
        self.init
    }

    fn successor(&self, state: &usize, decision: &[usize]) -> usize {
        self.step_decision(*state, decision)
    }

    fn in_goal(&self, agent: usize, state: &usize) -> bool {
        self.goals[agent][*state]
    }

    fn state_label(&self, state: &usize) -> String {
        self.states[*state].clone()
    }

    fn action_label(&self, agent: usize, action: usize) -> String {
        self.actions[agent][action].clone()
    }
}

/// One named row `state, decision -> target` of a transition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRow {
    pub state: String,
    pub decision: Vec<String>,
    pub target: String,
}

/// A system described by names, as read from a file, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SystemDescription {
    pub states: Vec<String>,
    pub init: String,
    pub actions: Vec<Vec<String>>,
    pub goals: Vec<Vec<String>>,
    pub rows: Vec<TransitionRow>,
}

impl SystemDescription {
    /// Checks every representation invariant, reporting all violations.
    pub fn validate(&self) -> Result<(), Vec<ModelError>> {
        self.build().map(|_| ())
    }

    pub fn build(&self) -> Result<ExplicitSystem, Vec<ModelError>> {
        let mut errors = Vec::new();
        let mut state_index = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if state_index.insert(s.as_str(), i).is_some() {
                errors.push(ModelError::DuplicateState(s.clone()));
            }
        }
        if self.states.is_empty() {
            errors.push(ModelError::NoStates);
        }
        let k = self.actions.len();
        if k == 0 || k > MAX_AGENTS {
            errors.push(ModelError::AgentCount(k));
        }
        let init = match state_index.get(self.init.as_str()) {
            Some(&i) => i,
            None => {
                errors.push(ModelError::UnknownState(self.init.clone()));
                0
            }
        };
        let mut action_index: Vec<HashMap<&str, usize>> = Vec::with_capacity(k);
        for (i, acts) in self.actions.iter().enumerate() {
            if acts.len() < 2 {
                errors.push(ModelError::SingletonActionSet(i));
            }
            let mut m = HashMap::new();
            for (a, name) in acts.iter().enumerate() {
                if m.insert(name.as_str(), a).is_some() {
                    errors.push(ModelError::DuplicateAction {
                        agent: i,
                        action: name.clone(),
                    });
                }
            }
            action_index.push(m);
        }
        let mut goals = Vec::with_capacity(self.goals.len());
        if self.goals.len() != k {
            errors.push(ModelError::CountMismatch {
                what: "goal sets",
                expected: k,
                got: self.goals.len(),
            });
        }
        for g in &self.goals {
            let mut ids = Vec::new();
            for name in g {
                match state_index.get(name.as_str()) {
                    Some(&v) => ids.push(v),
                    None => errors.push(ModelError::UnknownState(name.clone())),
                }
            }
            goals.push(ids);
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        let mut strides = vec![1usize; k];
        let mut dcount = 1usize;
        for i in (0..k).rev() {
            strides[i] = dcount;
            dcount = dcount.saturating_mul(self.actions[i].len());
        }
        let rows = self.states.len().saturating_mul(dcount);
        if rows > super::DEFAULT_ROW_CAP as usize {
            return Err(vec![ModelError::CapExceeded {
                required: rows as u128,
                cap: super::DEFAULT_ROW_CAP,
            }]);
        }
        let mut table: Vec<Option<usize>> = vec![None; rows];
        for row in &self.rows {
            let v = state_index.get(row.state.as_str()).copied();
            if v.is_none() {
                errors.push(ModelError::UnknownState(row.state.clone()));
            }
            let t = state_index.get(row.target.as_str()).copied();
            if t.is_none() {
                errors.push(ModelError::UnknownState(row.target.clone()));
            }
            if row.decision.len() != k {
                errors.push(ModelError::CountMismatch {
                    what: "decision components",
                    expected: k,
                    got: row.decision.len(),
                });
                continue;
            }
            let mut d = Some(0usize);
            for (i, name) in row.decision.iter().enumerate() {
                match action_index[i].get(name.as_str()) {
                    Some(&a) => d = d.map(|d| d + a * strides[i]),
                    None => {
                        errors.push(ModelError::UnknownAction {
                            agent: i,
                            action: name.clone(),
                        });
                        d = None;
                    }
                }
            }
            if let (Some(v), Some(t), Some(d)) = (v, t, d) {
                let slot = &mut table[v * dcount + d];
                if slot.is_some() {
                    errors.push(ModelError::DuplicateRow {
                        state: row.state.clone(),
                        decision: row.decision.clone(),
                    });
                }
                *slot = Some(t);
            }
        }
        for (idx, slot) in table.iter().enumerate() {
            if slot.is_none() {
                let (v, d) = (idx / dcount, idx % dcount);
                errors.push(ModelError::MissingTransitionRow {
                    state: self.states[v].clone(),
                    decision: (0..k)
                        .map(|i| self.actions[i][d / strides[i] % self.actions[i].len()].clone())
                        .collect(),
                });
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        ExplicitSystem::from_table(
            self.states.clone(),
            init,
            self.actions.clone(),
            goals,
            table
                .into_iter()
                .map(|t| t.expect("checked above"))
                .collect(),
        )
    }
}
