use super::{AgentSet, ExplicitSystem, ModelError};

/// An ultimately periodic state sequence `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoTrace {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl LassoTrace {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Self {
        LassoTrace { prefix, cycle }
    }

    /// All states in order: the prefix, then one copy of the cycle.
    pub fn states(&self) -> impl Iterator<Item = usize> + '_ {
        self.prefix.iter().chain(&self.cycle).copied()
    }

    /// Checks that the lasso starts at the initial state and that every step
    /// (including the wrap from the end of the cycle back to its start) is
    /// allowed by some decision.
    pub fn check(&self, sys: &ExplicitSystem) -> Result<(), ModelError> {
        if self.cycle.is_empty() {
            return Err(ModelError::EmptyCycle);
        }
        if let Some(bad) = self.states().find(|&v| v >= sys.state_count()) {
            return Err(ModelError::IndexOutOfRange {
                what: "trace state",
                index: bad,
                limit: sys.state_count(),
            });
        }
        if self.states().next() != Some(sys.init()) {
            return Err(ModelError::TraceStart);
        }
        let seq: Vec<usize> = self.states().chain(Some(self.cycle[0])).collect();
        for (position, pair) in seq.windows(2).enumerate() {
            if !sys.row(pair[0]).contains(&pair[1]) {
                return Err(ModelError::NotATrace {
                    position,
                    from: sys.state_name(pair[0]).to_string(),
                    to: sys.state_name(pair[1]).to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Agents whose goal is visited somewhere on the trace, the first state included.
pub fn winning_set(sys: &ExplicitSystem, trace: &LassoTrace) -> Result<AgentSet, ModelError> {
    trace.check(sys)?;
    Ok(trace
        .states()
        .fold(AgentSet::empty(), |acc, v| acc.union(sys.goals_at(v))))
}
