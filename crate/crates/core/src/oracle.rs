//! Random instance generators and brute-force reference implementations
//! used to cross-check the realizability and verification engines.
//!
//! The reference code shares only the model types with the engines. Danger
//! regions come from naive fixed-point iteration, and lasso existence from a
//! transitive closure over a fully materialized tracker graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Ref};
use crate::game::{Player, ReachabilityGame};
use crate::model::{
    AgentSet, CircuitSystem, CircuitTransducer, ExplicitSystem, ExplicitTransducer,
};
use crate::realize::{certify_witness, realize_explicit, RealizabilityVerdict, RealizeError};
use crate::verify::deviation_reachable;

/// Largest graph the brute-force routines will materialize.
pub const BRUTE_CAP: usize = 1 << 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("brute-force graph would need {required} nodes (cap {cap})")]
    CapExceeded { required: usize, cap: usize },
    #[error("profile has {got} strategies but the system has {expected} agents")]
    ProfileArity { expected: usize, got: usize },
    #[error("agent {0} out of range")]
    AgentOutOfRange(usize),
}

/// Shape of a random explicit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSystemParams {
    /// 1 to 6 states.
    pub state_count: usize,
    /// 1 to 3 agents.
    pub agent_count: usize,
    /// 2 or 3 actions per agent.
    pub actions_per_agent: usize,
    /// Probability that a given state is in a given agent's goal.
    pub goal_density: f64,
    pub seed: u64,
}

impl RandomSystemParams {
    pub fn new(state_count: usize, agent_count: usize, seed: u64) -> Self {
        RandomSystemParams {
            state_count,
            agent_count,
            actions_per_agent: 2,
            goal_density: 0.3,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let bad = |msg: String| Err(OracleError::BadParams(msg));
        if !(1..=6).contains(&self.state_count) {
            return bad(format!("state count {} not in 1..=6", self.state_count));
        }
        if !(1..=3).contains(&self.agent_count) {
            return bad(format!("agent count {} not in 1..=3", self.agent_count));
        }
        if !(2..=3).contains(&self.actions_per_agent) {
            return bad(format!(
                "{} actions per agent not in 2..=3",
                self.actions_per_agent
            ));
        }
        if !(0.0..=1.0).contains(&self.goal_density) {
            return bad(format!("goal density {} not in [0, 1]", self.goal_density));
        }
        Ok(())
    }
}

/// Draws a system with uniformly random transitions; deterministic in the seed.
pub fn gen_random_explicit(p: &RandomSystemParams) -> Result<ExplicitSystem, OracleError> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    Ok(random_explicit(&mut rng, p))
}

fn random_explicit(rng: &mut impl Rng, p: &RandomSystemParams) -> ExplicitSystem {
    let n = p.state_count;
    let states: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let actions: Vec<Vec<String>> = (0..p.agent_count)
        .map(|_| (0..p.actions_per_agent).map(|a| format!("a{a}")).collect())
        .collect();
    let goals: Vec<Vec<usize>> = (0..p.agent_count)
        .map(|_| (0..n).filter(|_| rng.gen_bool(p.goal_density)).collect())
        .collect();
    let decisions = p.actions_per_agent.pow(p.agent_count as u32);
    let table = (0..n * decisions).map(|_| rng.gen_range(0..n)).collect();
    ExplicitSystem::from_table(states, 0, actions, goals, table)
        .expect("random systems are well formed")
}

/// Random explicit transducers with 1 to `max_states` states each.
pub fn gen_random_profile(
    rng: &mut impl Rng,
    sys: &ExplicitSystem,
    max_states: usize,
) -> Vec<ExplicitTransducer> {
    (0..sys.agent_count())
        .map(|i| {
            let q = rng.gen_range(1..=max_states.max(1));
            let inputs = sys.state_count();
            let trans = (0..q * inputs).map(|_| rng.gen_range(0..q)).collect();
            let output = (0..q)
                .map(|_| rng.gen_range(0..sys.action_count(i)))
                .collect();
            ExplicitTransducer::new(
                (0..q).map(|s| format!("q{s}")).collect(),
                0,
                inputs,
                trans,
                output,
            )
            .expect("random transducers are well formed")
        })
        .collect()
}

/// Random game with 1 to 3 successors per state and initial state 0.
pub fn gen_random_game(rng: &mut impl Rng, states: usize, goal_density: f64) -> ReachabilityGame {
    let owner = (0..states)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Player::Reacher
            } else {
                Player::Avoider
            }
        })
        .collect();
    let succ = (0..states)
        .map(|_| {
            let k = rng.gen_range(1..=3.min(states));
            let mut all: Vec<usize> = (0..states).collect();
            all.shuffle(rng);
            all.truncate(k);
            all
        })
        .collect();
    let goal = (0..states).map(|_| rng.gen_bool(goal_density)).collect();
    ReachabilityGame::new(owner, Some(0), succ, goal).expect("random games are total")
}

fn random_ref(rng: &mut impl Rng, inputs: usize, gates: usize) -> Ref {
    let k = rng.gen_range(0..inputs + gates);
    if k < inputs {
        Ref::Input(k)
    } else {
        Ref::Gate(k - inputs)
    }
}

/// Random well-formed circuit with `gates` gates.
pub fn gen_random_circuit(
    rng: &mut impl Rng,
    inputs: usize,
    outputs: usize,
    gates: usize,
) -> Circuit {
    let mut gs = Vec::with_capacity(gates);
    for g in 0..gates {
        let a = random_ref(rng, inputs, g);
        let b = random_ref(rng, inputs, g);
        gs.push(match rng.gen_range(0..10) {
            0 => Gate::Const1,
            1..=2 => Gate::Not(a),
            3..=6 => Gate::And(a, b),
            _ => Gate::Or(a, b),
        });
    }
    let outs = (0..outputs)
        .map(|_| random_ref(rng, inputs, gates))
        .collect();
    Circuit::new(inputs, gs, outs).expect("random circuits only refer backwards")
}

/// Random circuit system with the given number of state variables and one
/// action variable for each of `agents` agents.
pub fn gen_random_circuit_system(
    rng: &mut impl Rng,
    state_vars: usize,
    agents: usize,
) -> CircuitSystem {
    let inputs = state_vars + agents;
    let phi = gen_random_circuit(rng, inputs, state_vars, 3 * inputs);
    let goals = (0..agents)
        .map(|_| gen_random_circuit(rng, state_vars, 1, 2 * state_vars))
        .collect();
    let init = (0..state_vars).map(|_| rng.gen_bool(0.5)).collect();
    CircuitSystem::new(state_vars, init, vec![1; agents], goals, phi)
        .expect("random circuit systems are well formed")
}

/// Random circuit transducer for agent `agent` of `sys` with 1 or 2 state variables.
pub fn gen_random_circuit_transducer(
    rng: &mut impl Rng,
    sys: &CircuitSystem,
    agent: usize,
) -> CircuitTransducer {
    let sv = rng.gen_range(1..=2);
    let omega = gen_random_circuit(rng, sv + sys.state_vars(), sv, 2 * (sv + sys.state_vars()));
    let output = gen_random_circuit(rng, sv, sys.action_vars()[agent], 2 * sv);
    let init = (0..sv).map(|_| rng.gen_bool(0.5)).collect();
    CircuitTransducer::new(sv, init, omega, output).expect("random transducers are well formed")
}

/// Dense boolean reachability matrix closed under composition.
struct Closure {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Closure {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Closure {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Warshall's algorithm: afterwards `get(i, j)` iff a nonempty path leads from i to j.
    fn close(&mut self) {
        for k in 0..self.n {
            let row_k = self.bits[k * self.words..(k + 1) * self.words].to_vec();
            for i in 0..self.n {
                if self.get(i, k) {
                    for (w, &x) in row_k.iter().enumerate() {
                        self.bits[i * self.words + w] |= x;
                    }
                }
            }
        }
    }
}

fn check_cap(required: usize) -> Result<(), OracleError> {
    if required > BRUTE_CAP {
        Err(OracleError::CapExceeded {
            required,
            cap: BRUTE_CAP,
        })
    } else {
        Ok(())
    }
}

/// States from which agent `j` can force its goal when everyone else
/// announces a decision first and `j` then substitutes its own action.
fn forcing_region(sys: &ExplicitSystem, j: usize) -> Vec<bool> {
    let n = sys.state_count();
    let mut region: Vec<bool> = (0..n).map(|v| sys.in_goal(j, v)).collect();
    loop {
        let next: Vec<bool> = (0..n)
            .map(|v| {
                region[v]
                    || (0..sys.decision_count()).all(|d| {
                        (0..sys.action_count(j))
                            .any(|a| region[sys.step(v, sys.with_component(d, j, a))])
                    })
            })
            .collect();
        if next == region {
            return region;
        }
        region = next;
    }
}

/// Reference decision procedure for realizability of coalition `w`.
///
/// Nodes pair a state with the set of coalition goals seen so far. Nodes
/// and moves from which some outsider can force its goal are dropped, and
/// the answer is whether a node that has seen every coalition goal is
/// reachable and lies on a cycle.
pub fn brute_realize(sys: &ExplicitSystem, w: AgentSet) -> Result<bool, OracleError> {
    let k = sys.agent_count();
    if let Some(j) = w.iter().find(|&j| j >= k) {
        return Err(OracleError::AgentOutOfRange(j));
    }
    let n = sys.state_count();
    let members: Vec<usize> = w.iter().collect();
    let subsets = 1usize << members.len();
    check_cap(n * subsets)?;
    check_cap(n * sys.decision_count())?;
    let outsiders: Vec<usize> = (0..k).filter(|&j| !w.contains(j)).collect();
    let regions: Vec<Vec<bool>> = outsiders.iter().map(|&j| forcing_region(sys, j)).collect();
    let safe_state =
        |v: usize| outsiders.iter().all(|&j| !sys.in_goal(j, v)) && regions.iter().all(|r| !r[v]);
    let safe_move = |v: usize, d: usize| {
        outsiders.iter().zip(&regions).all(|(&j, r)| {
            (0..sys.action_count(j)).all(|a| !r[sys.step(v, sys.with_component(d, j, a))])
        })
    };
    let seen_at = |v: usize| {
        members
            .iter()
            .enumerate()
            .filter(|&(_, &i)| sys.in_goal(i, v))
            .fold(0usize, |acc, (bit, _)| acc | 1 << bit)
    };
    let node = |v: usize, s: usize| v * subsets + s;
    let total = n * subsets;
    let mut graph = Closure::new(total);
    for v in (0..n).filter(|&v| safe_state(v)) {
        for d in (0..sys.decision_count()).filter(|&d| safe_move(v, d)) {
            let t = sys.step(v, d);
            if !safe_state(t) {
                continue;
            }
            for s in 0..subsets {
                graph.set(node(v, s), node(t, s | seen_at(t)));
            }
        }
    }
    graph.close();
    let v0 = sys.init();
    if !safe_state(v0) {
        return Ok(false);
    }
    let start = node(v0, seen_at(v0));
    let full = subsets - 1;
    Ok((0..n).any(|v| {
        let x = node(v, full);
        (x == start || graph.get(start, x)) && graph.get(x, x)
    }))
}

/// Reference check for a profitable deviation of agent `j`: materializes
/// every product configuration, closes the one-step relation, and asks
/// whether a configuration in `j`'s goal is reachable from the start.
pub fn brute_deviation(
    sys: &ExplicitSystem,
    profile: &[ExplicitTransducer],
    j: usize,
) -> Result<bool, OracleError> {
    let k = sys.agent_count();
    if profile.len() != k {
        return Err(OracleError::ProfileArity {
            expected: k,
            got: profile.len(),
        });
    }
    if j >= k {
        return Err(OracleError::AgentOutOfRange(j));
    }
    let sizes: Vec<usize> = profile
        .iter()
        .map(ExplicitTransducer::state_count)
        .collect();
    let combos = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .unwrap_or(usize::MAX);
    let total = combos.saturating_mul(sys.state_count());
    check_cap(total)?;
    let encode =
        |v: usize, ts: &[usize]| ts.iter().zip(&sizes).fold(v, |acc, (&t, &s)| acc * s + t);
    let decode = |mut x: usize| {
        let mut ts = vec![0; k];
        for i in (0..k).rev() {
            ts[i] = x % sizes[i];
            x /= sizes[i];
        }
        (x, ts)
    };
    let mut graph = Closure::new(total);
    for x in 0..total {
        let (v, ts) = decode(x);
        let next: Vec<usize> = profile
            .iter()
            .zip(&ts)
            .map(|(t, &s)| t.successor(s, v))
            .collect();
        let mut decision: Vec<usize> = profile
            .iter()
            .zip(&next)
            .map(|(t, &s)| t.output_of(s))
            .collect();
        for a in 0..sys.action_count(j) {
            decision[j] = a;
            graph.set(x, encode(sys.step_decision(v, &decision), &next));
        }
    }
    graph.close();
    let start = encode(
        sys.init(),
        &profile
            .iter()
            .map(ExplicitTransducer::init)
            .collect::<Vec<_>>(),
    );
    Ok((0..total).any(|x| {
        let (v, _) = decode(x);
        sys.in_goal(j, v) && (x == start || graph.get(start, x))
    }))
}

/// Tallies from a consistency run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub seed: u64,
    pub count: usize,
    pub realize_checks: usize,
    pub realize_mismatches: usize,
    pub witness_checks: usize,
    pub witness_failures: usize,
    pub deviation_checks: usize,
    pub deviation_mismatches: usize,
    /// Description of the first disagreement found.
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.realize_mismatches == 0 && self.witness_failures == 0 && self.deviation_mismatches == 0
    }

    fn fail(&mut self, what: String) {
        if self.first_failure.is_none() {
            self.first_failure = Some(what);
        }
    }

    /// Compares `realizer` against [`brute_realize`] for every coalition of
    /// `sys` and certifies each positive witness.
    pub fn check_system<F>(&mut self, label: &str, sys: &ExplicitSystem, realizer: &F)
    where
        F: Fn(&ExplicitSystem, AgentSet) -> Result<RealizabilityVerdict, RealizeError>,
    {
        for w in AgentSet::all_subsets(sys.agent_count()) {
            let expected = brute_realize(sys, w).expect("suite systems fit the brute-force cap");
            let verdict = realizer(sys, w).expect("suite coalitions are in range");
            self.realize_checks += 1;
            if verdict.answer != expected {
                self.realize_mismatches += 1;
                self.fail(format!(
                    "{label}: coalition {w}: engine says {}, reference says {}",
                    verdict.answer, expected
                ));
            }
            if let Some(word) = &verdict.witness {
                self.witness_checks += 1;
                if certify_witness(sys, w, word) != Ok(true) {
                    self.witness_failures += 1;
                    self.fail(format!(
                        "{label}: coalition {w}: witness fails certification"
                    ));
                }
            }
        }
    }

    /// Compares [`deviation_reachable`] against [`brute_deviation`] for every agent.
    pub fn check_profile(
        &mut self,
        label: &str,
        sys: &ExplicitSystem,
        profile: &[ExplicitTransducer],
    ) {
        for j in 0..sys.agent_count() {
            let expected = brute_deviation(sys, profile, j).expect("suite profiles fit the cap");
            let found = deviation_reachable(sys, profile, j).is_some();
            self.deviation_checks += 1;
            if found != expected {
                self.deviation_mismatches += 1;
                self.fail(format!(
                    "{label}: agent {j}: engine deviation {found}, reference {expected}"
                ));
            }
        }
    }
}

/// Runs [`consistency_suite_with`] against the real engine.
pub fn consistency_suite(seed: u64, count: usize) -> SuiteReport {
    consistency_suite_with(seed, count, &realize_explicit)
}

/// Draws `count` random systems (instance i seeded with `seed + i`) and
/// cross-checks `realizer`, its witnesses, and deviation search on a random
/// profile against the reference implementations.
pub fn consistency_suite_with<F>(seed: u64, count: usize, realizer: &F) -> SuiteReport
where
    F: Fn(&ExplicitSystem, AgentSet) -> Result<RealizabilityVerdict, RealizeError>,
{
    let mut report = SuiteReport {
        seed,
        count,
        ..SuiteReport::default()
    };
    for i in 0..count {
        let instance = seed.wrapping_add(i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(instance);
        let params = RandomSystemParams {
            state_count: rng.gen_range(1..=5),
            agent_count: rng.gen_range(1..=3),
            actions_per_agent: 2,
            goal_density: 0.3,
            seed: instance,
        };
        let sys = random_explicit(&mut rng, &params);
        let label = format!("instance {instance}");
        report.check_system(&label, &sys, realizer);
        let profile = gen_random_profile(&mut rng, &sys, 3);
        report.check_profile(&label, &sys, &profile);
    }
    report
}
