//! Deciding whether some strategy profile is a Nash equilibrium in which
//! exactly a given coalition of agents reaches its goals.
//!
//! The pipeline builds a goal-tracking Büchi automaton over decisions, solves
//! one deviation game per agent outside the coalition, removes the states and
//! decisions from which a losing agent could force its goal, and searches the
//! remaining automaton for an accepted lasso.

mod automaton;
mod certify;
mod deviation;

use thiserror::Error;

use crate::model::{reachable_fragment, AgentSet, CircuitSystem, ExplicitSystem, ModelError};

pub use automaton::{build_aw, nonempty, prune, BuchiAW, GoalTracker, LassoWord};
pub use certify::{certify_witness, induced_run, Certificate, InducedRun, Receipt};
pub use deviation::{build_deviation_game, DeviationGame, SolvedDeviation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("coalition {coalition} names agents outside 0..{agents}")]
    CoalitionOutOfRange { coalition: AgentSet, agents: usize },
    #[error("witness cycle is empty")]
    EmptyCycle,
    #[error("decision index {index} out of range (system has {limit} decisions)")]
    BadDecision { index: usize, limit: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Knobs for the realizability pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealizeOptions {
    /// Remove states and decisions from which a losing agent can force its
    /// goal. Turning this off yields an unsound decision procedure and exists
    /// only so test harnesses can check that the oracle notices.
    pub prune: bool,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { prune: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizabilityVerdict {
    pub coalition: AgentSet,
    pub answer: bool,
    pub witness: Option<LassoWord>,
    pub certificate: Option<Certificate>,
    /// Reachable states of the pruned automaton that was searched.
    pub automaton_states: usize,
}

fn check_coalition(sys_agents: usize, w: AgentSet) -> Result<(), RealizeError> {
    if w.is_subset(AgentSet::full(sys_agents)) {
        Ok(())
    } else {
        Err(RealizeError::CoalitionOutOfRange {
            coalition: w,
            agents: sys_agents,
        })
    }
}

/// Solved deviation games for every agent outside `w`.
pub fn solve_deviations(sys: &ExplicitSystem, w: AgentSet) -> Vec<SolvedDeviation> {
    (0..sys.agent_count())
        .filter(|&j| !w.contains(j))
        .map(|j| build_deviation_game(sys, j).solve())
        .collect()
}

pub fn realize_explicit(
    sys: &ExplicitSystem,
    w: AgentSet,
) -> Result<RealizabilityVerdict, RealizeError> {
    realize_explicit_with(sys, w, RealizeOptions::default())
}

pub fn realize_explicit_with(
    sys: &ExplicitSystem,
    w: AgentSet,
    options: RealizeOptions,
) -> Result<RealizabilityVerdict, RealizeError> {
    check_coalition(sys.agent_count(), w)?;
    let aw = build_aw(sys, w);
    let solved = solve_deviations(sys, w);
    let aw = if options.prune {
        prune(aw, &solved)
    } else {
        aw
    };
    let witness = nonempty(&aw);
    let certificate = witness
        .as_ref()
        .map(|word| Certificate::build(sys, word, &solved))
        .transpose()?;
    Ok(RealizabilityVerdict {
        coalition: w,
        answer: witness.is_some(),
        witness,
        certificate,
        automaton_states: aw.state_count(),
    })
}

/// Verdict for a circuit system together with the explicit fragment it refers to.
#[derive(Debug, Clone)]
pub struct CircuitRealization {
    /// Reachable part of the unfolded system; witness decisions and
    /// certificate states index into it.
    pub fragment: ExplicitSystem,
    pub verdict: RealizabilityVerdict,
}

/// Realizability for a circuit system, materializing only the states
/// reachable from its initial state.
pub fn realize_circuit(
    csys: &CircuitSystem,
    w: AgentSet,
    cap: u128,
) -> Result<CircuitRealization, RealizeError> {
    check_coalition(csys.action_vars().len(), w)?;
    let fragment = reachable_fragment(csys, cap)?;
    let verdict = realize_explicit(&fragment, w)?;
    Ok(CircuitRealization { fragment, verdict })
}
