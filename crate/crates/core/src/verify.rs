//! Checking whether a concrete strategy profile is a Nash equilibrium with a
//! prescribed winning set.
//!
//! The profile and system run in lockstep as a product machine. The primary
//! trace is followed until a product configuration repeats; each losing agent
//! is then given free control of its own actions in a breadth-first search of
//! the product for a path into its goal.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::model::{
    AgentSet, CircuitSystem, ExplicitSystem, ModelError, MultiAgentSystem, Strategy,
    StrategyProfile,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("profile has {got} strategies but the system has {expected} agents")]
    ArityMismatch { expected: usize, got: usize },
    #[error("profile representation does not match the system representation")]
    RepresentationMismatch,
    #[error("coalition {coalition} names agents outside 0..{agents}")]
    CoalitionOutOfRange { coalition: AgentSet, agents: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A system state together with every agent's transducer state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductConfig<S, T> {
    pub sys_state: S,
    pub trans_states: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryTraceReport<S, T> {
    /// Configurations from the initial one up to and including the first
    /// repeated configuration.
    pub path: Vec<ProductConfig<S, T>>,
    /// Index in `path` of the first occurrence of the final configuration.
    pub cycle_start: usize,
    /// Decision taken at each step; `decisions[i]` leads from `path[i]` to `path[i + 1]`.
    pub decisions: Vec<Vec<usize>>,
    pub winning_set: AgentSet,
}

impl<S: Clone, T> PrimaryTraceReport<S, T> {
    /// System states before the periodic part.
    pub fn prefix_states(&self) -> Vec<S> {
        self.path[..self.cycle_start]
            .iter()
            .map(|c| c.sys_state.clone())
            .collect()
    }

    /// System states of one period.
    pub fn cycle_states(&self) -> Vec<S> {
        self.path[self.cycle_start..self.path.len() - 1]
            .iter()
            .map(|c| c.sys_state.clone())
            .collect()
    }
}

/// A path by which agent `agent`, acting alone, reaches its goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationWitness<S> {
    pub agent: usize,
    pub action_path: Vec<usize>,
    pub reached_goal_state: S,
}

/// One synchronous step of the system and all transducers: each transducer
/// reads the current system state, and the decision is assembled from the
/// outputs of the new transducer states.
pub fn product_step<M, T>(
    sys: &M,
    profile: &[T],
    cfg: &ProductConfig<M::State, T::State>,
) -> (ProductConfig<M::State, T::State>, Vec<usize>)
where
    M: MultiAgentSystem,
    T: Strategy<M::State>,
{
    let (trans_states, decision) = advance(profile, cfg);
    let next = sys.successor(&cfg.sys_state, &decision);
    (
        ProductConfig {
            sys_state: next,
            trans_states,
        },
        decision,
    )
}

fn advance<S, T: Strategy<S>>(
    profile: &[T],
    cfg: &ProductConfig<S, T::State>,
) -> (Vec<T::State>, Vec<usize>) {
    profile
        .iter()
        .zip(&cfg.trans_states)
        .map(|(t, s)| {
            let next = t.next(s, &cfg.sys_state);
            let a = t.output(&next);
            (next, a)
        })
        .unzip()
}

fn initial_config<M, T>(sys: &M, profile: &[T]) -> ProductConfig<M::State, T::State>
where
    M: MultiAgentSystem,
    T: Strategy<M::State>,
{
    ProductConfig {
        sys_state: sys.initial_state(),
        trans_states: profile.iter().map(Strategy::initial).collect(),
    }
}

/// Follows the profile from the initial configuration until a configuration repeats.
pub fn primary_trace<M, T>(sys: &M, profile: &[T]) -> PrimaryTraceReport<M::State, T::State>
where
    M: MultiAgentSystem,
    T: Strategy<M::State>,
{
    let mut cfg = initial_config(sys, profile);
    let mut seen: HashMap<ProductConfig<M::State, T::State>, usize> = HashMap::new();
    let mut path = Vec::new();
    let mut decisions = Vec::new();
    let mut winning = AgentSet::empty();
    let cycle_start = loop {
        if let Some(&first) = seen.get(&cfg) {
            path.push(cfg);
            break first;
        }
        winning = winning.union(sys.goals_at(&cfg.sys_state));
        seen.insert(cfg.clone(), path.len());
        let (next, d) = product_step(sys, profile, &cfg);
        path.push(cfg);
        decisions.push(d);
        cfg = next;
    };
    PrimaryTraceReport {
        path,
        cycle_start,
        decisions,
        winning_set: winning,
    }
}

/// Breadth-first search for a path on which agent `j` alone picks its own
/// actions (the others follow the profile) and reaches its goal.
///
/// The witness is a shortest such path, ties broken by action order.
pub fn deviation_reachable<M, T>(
    sys: &M,
    profile: &[T],
    j: usize,
) -> Option<DeviationWitness<M::State>>
where
    M: MultiAgentSystem,
    T: Strategy<M::State>,
{
    let start = initial_config(sys, profile);
    if sys.in_goal(j, &start.sys_state) {
        return Some(DeviationWitness {
            agent: j,
            action_path: Vec::new(),
            reached_goal_state: start.sys_state,
        });
    }
    // configurations in discovery order, each with its parent index and the
    // deviator's action that led to it
    let mut configs = vec![start.clone()];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(at) = queue.pop_front() {
        let cfg = configs[at].clone();
        let (trans_states, mut decision) = advance(profile, &cfg);
        for a in 0..sys.action_count(j) {
            decision[j] = a;
            let next = ProductConfig {
                sys_state: sys.successor(&cfg.sys_state, &decision),
                trans_states: trans_states.clone(),
            };
            if index.contains_key(&next) {
                continue;
            }
            let id = configs.len();
            index.insert(next.clone(), id);
            configs.push(next);
            parent.push(Some((at, a)));
            if sys.in_goal(j, &configs[id].sys_state) {
                let mut actions = Vec::new();
                let mut cur = id;
                while let Some((p, a)) = parent[cur] {
                    actions.push(a);
                    cur = p;
                }
                actions.reverse();
                return Some(DeviationWitness {
                    agent: j,
                    action_path: actions,
                    reached_goal_state: configs.swap_remove(id).sys_state,
                });
            }
            queue.push_back(id);
        }
    }
    None
}

/// Why a profile is not an equilibrium with the requested winning set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    GoalMismatch {
        expected: AgentSet,
        observed: AgentSet,
    },
    /// A losing agent's profitable deviation, with state and action labels.
    Deviation {
        agent: usize,
        actions: Vec<String>,
        reached: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub is_wne: bool,
    pub observed_winning_set: AgentSet,
    pub counterexample: Option<Counterexample>,
    /// Labels of the primary trace's states before the periodic part.
    pub trace_prefix: Vec<String>,
    /// Labels of one period of the primary trace.
    pub trace_cycle: Vec<String>,
    /// Number of product steps taken before a configuration repeated.
    pub trace_steps: usize,
}

/// A system in either representation.
#[derive(Debug, Clone, Copy)]
pub enum SystemRef<'a> {
    Explicit(&'a ExplicitSystem),
    Circuit(&'a CircuitSystem),
}

/// Checks the profile against coalition `w`: the primary trace's winning set
/// must be `w`, and no agent outside `w` may reach its goal by deviating
/// alone. Goal mismatches are reported before deviations, and deviating
/// agents are tried in ascending order.
pub fn verify(
    sys: SystemRef<'_>,
    profile: &StrategyProfile,
    w: AgentSet,
) -> Result<Verdict, VerifyError> {
    match (sys, profile) {
        (SystemRef::Explicit(s), StrategyProfile::Explicit(p)) => {
            check_arity(s.agent_count(), p.len(), w)?;
            for (i, t) in p.iter().enumerate() {
                t.check_against(s, i)?;
            }
            Ok(verify_with(s, p, w))
        }
        (SystemRef::Circuit(s), StrategyProfile::Circuit(p)) => {
            check_arity(s.agent_count(), p.len(), w)?;
            for (i, t) in p.iter().enumerate() {
                t.check_against(s, i)?;
            }
            Ok(verify_with(s, p, w))
        }
        _ => Err(VerifyError::RepresentationMismatch),
    }
}

fn check_arity(agents: usize, strategies: usize, w: AgentSet) -> Result<(), VerifyError> {
    if agents != strategies {
        return Err(VerifyError::ArityMismatch {
            expected: agents,
            got: strategies,
        });
    }
    if !w.is_subset(AgentSet::full(agents)) {
        return Err(VerifyError::CoalitionOutOfRange {
            coalition: w,
            agents,
        });
    }
    Ok(())
}

/// [`verify`] for an already checked system and profile.
pub fn verify_with<M, T>(sys: &M, profile: &[T], w: AgentSet) -> Verdict
where
    M: MultiAgentSystem,
    T: Strategy<M::State>,
{
    let report = primary_trace(sys, profile);
    let labels = |states: Vec<M::State>| states.iter().map(|s| sys.state_label(s)).collect();
    let mut verdict = Verdict {
        is_wne: false,
        observed_winning_set: report.winning_set,
        counterexample: None,
        trace_prefix: labels(report.prefix_states()),
        trace_cycle: labels(report.cycle_states()),
        trace_steps: report.decisions.len(),
    };
    if report.winning_set != w {
        verdict.counterexample = Some(Counterexample::GoalMismatch {
            expected: w,
            observed: report.winning_set,
        });
        return verdict;
    }
    for j in (0..sys.agent_count()).filter(|&j| !w.contains(j)) {
        if let Some(dev) = deviation_reachable(sys, profile, j) {
            verdict.counterexample = Some(Counterexample::Deviation {
                agent: j,
                actions: dev
                    .action_path
                    .iter()
                    .map(|&a| sys.action_label(j, a))
                    .collect(),
                reached: sys.state_label(&dev.reached_goal_state),
            });
            return verdict;
        }
    }
    verdict.is_wne = true;
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ExplicitTransducer;
    use crate::testutil::{constant_profile, sys1};

    #[test]
    fn product_step_p1() {
        let s = sys1();
        let p = constant_profile(&s, 0, 0);
        let (next, d) = product_step(&s, &p, &initial_config(&s, &p));
        assert_eq!(next.sys_state, 1);
        assert_eq!(d, vec![0, 0]);
        let (again, _) = product_step(&s, &p, &next);
        assert_eq!(again.sys_state, 1);
    }

    #[test]
    fn primary_trace_examples() {
        let s = sys1();
        let r = primary_trace(&s, &constant_profile(&s, 0, 0));
        assert_eq!(r.path.len(), 3);
        assert_eq!(r.cycle_start, 1);
        assert_eq!(r.winning_set, AgentSet::singleton(0));
        assert_eq!(r.prefix_states(), vec![0]);
        assert_eq!(r.cycle_states(), vec![1]);

        let r = primary_trace(&s, &constant_profile(&s, 0, 1));
        assert_eq!(r.cycle_start, 0);
        assert_eq!(r.winning_set, AgentSet::empty());
    }

    #[test]
    fn one_state_system_repeats_immediately() {
        let one = ExplicitSystem::from_table(
            vec!["z".into()],
            0,
            vec![vec!["a".into(), "b".into()]],
            vec![vec![]],
            vec![0, 0],
        )
        .unwrap();
        let r = primary_trace(&one, &[ExplicitTransducer::constant(1, 1)]);
        assert_eq!(r.cycle_start, 0);
        assert_eq!(r.path.len(), 2);
    }

    #[test]
    fn deviation_examples() {
        let s = sys1();
        assert_eq!(
            deviation_reachable(&s, &constant_profile(&s, 0, 1), 1),
            None
        );
        let w = deviation_reachable(&s, &constant_profile(&s, 1, 0), 0).unwrap();
        assert_eq!(w.action_path, vec![0]);
        assert_eq!(w.reached_goal_state, 1);
    }

    #[test]
    fn deviation_at_initial_goal_is_empty() {
        let one = ExplicitSystem::from_table(
            vec!["z".into()],
            0,
            vec![vec!["a".into(), "b".into()]],
            vec![vec![0]],
            vec![0, 0],
        )
        .unwrap();
        let w = deviation_reachable(&one, &[ExplicitTransducer::constant(1, 0)], 0).unwrap();
        assert!(w.action_path.is_empty());
    }

    #[test]
    fn verify_examples() {
        let s = sys1();
        let p1 = StrategyProfile::Explicit(constant_profile(&s, 0, 0));
        let v = verify(SystemRef::Explicit(&s), &p1, AgentSet::singleton(0)).unwrap();
        assert!(v.is_wne);
        assert_eq!(v.trace_prefix, vec!["s0"]);
        assert_eq!(v.trace_cycle, vec!["s1"]);

        let pbx = StrategyProfile::Explicit(constant_profile(&s, 1, 0));
        let v = verify(SystemRef::Explicit(&s), &pbx, AgentSet::singleton(1)).unwrap();
        assert!(!v.is_wne);
        assert_eq!(
            v.counterexample,
            Some(Counterexample::Deviation {
                agent: 0,
                actions: vec!["a".into()],
                reached: "s1".into()
            })
        );

        let v = verify(SystemRef::Explicit(&s), &p1, AgentSet::singleton(1)).unwrap();
        assert_eq!(
            v.counterexample,
            Some(Counterexample::GoalMismatch {
                expected: AgentSet::singleton(1),
                observed: AgentSet::singleton(0)
            })
        );
    }

    #[test]
    fn verify_rejects_bad_profiles() {
        let s = sys1();
        let short = StrategyProfile::Explicit(vec![ExplicitTransducer::constant(3, 0)]);
        assert_eq!(
            verify(SystemRef::Explicit(&s), &short, AgentSet::empty()),
            Err(VerifyError::ArityMismatch {
                expected: 2,
                got: 1
            })
        );
        let circuit = StrategyProfile::Circuit(vec![]);
        assert_eq!(
            verify(SystemRef::Explicit(&s), &circuit, AgentSet::empty()),
            Err(VerifyError::RepresentationMismatch)
        );
    }
}
