mod common;

use common::{set, sys1, sys1_circuit};
use proptest::prelude::*;
use wnash::model::{winning_set, LassoTrace, DEFAULT_ROW_CAP};
use wnash::oracle::{brute_realize, gen_random_explicit, RandomSystemParams};
use wnash::realize::{
    build_aw, certify_witness, induced_run, nonempty, prune, realize_circuit, realize_explicit,
    solve_deviations, LassoWord,
};
use wnash::{AgentSet, ExplicitSystem};

#[test]
fn sys1_verdicts_for_every_coalition() {
    let sys = sys1();
    for (w, expected) in [
        (set(&[]), true),
        (set(&[0]), true),
        (set(&[1]), true),
        (set(&[0, 1]), false),
    ] {
        let v = realize_explicit(&sys, w).unwrap();
        assert_eq!(v.answer, expected, "coalition {w}");
        assert_eq!(v.witness.is_some(), expected);
        if let Some(word) = &v.witness {
            assert!(certify_witness(&sys, w, word).unwrap());
        }
    }
}

#[test]
fn sys1_coalition_zero_needs_both_cooperative_actions() {
    let sys = sys1();
    let v = realize_explicit(&sys, set(&[0])).unwrap();
    let word = v.witness.unwrap();
    let ax = sys.parse_decision("a,x").unwrap();
    assert_eq!(word.letter(0), ax);
    let cert = v.certificate.unwrap();
    assert_eq!(cert.winning_set, set(&[0]));
    assert_eq!(cert.trace.prefix, vec![0]);
    assert_eq!(cert.trace.cycle, vec![1]);
}

#[test]
fn circuit_encoding_of_sys1_gives_same_answers() {
    let csys = sys1_circuit();
    let sys = sys1();
    for w in AgentSet::all_subsets(2) {
        let c = realize_circuit(&csys, w, DEFAULT_ROW_CAP).unwrap();
        assert_eq!(
            c.verdict.answer,
            realize_explicit(&sys, w).unwrap().answer,
            "coalition {w}"
        );
    }
}

fn random_system(states: usize, agents: usize, seed: u64) -> ExplicitSystem {
    gen_random_explicit(&RandomSystemParams::new(states, agents, seed)).unwrap()
}

fn lasso(sys: &ExplicitSystem, prefix: &[usize], cycle: &[usize]) -> LassoWord {
    let dc = sys.decision_count();
    LassoWord {
        prefix: prefix.iter().map(|d| d % dc).collect(),
        cycle: cycle.iter().map(|d| d % dc).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn winning_set_ignores_cycle_rotation(
        states in 1usize..=5,
        agents in 1usize..=3,
        seed in any::<u64>(),
        prefix in prop::collection::vec(0usize..64, 0..4),
        cycle in prop::collection::vec(0usize..64, 1..4),
    ) {
        let sys = random_system(states, agents, seed);
        let run = induced_run(&sys, &lasso(&sys, &prefix, &cycle)).unwrap();
        let base = winning_set(&sys, &run.trace).unwrap();
        let mut p = run.trace.prefix.clone();
        p.push(run.trace.cycle[0]);
        let mut c = run.trace.cycle.clone();
        c.rotate_left(1);
        let rotated = LassoTrace::new(p, c);
        prop_assert_eq!(winning_set(&sys, &rotated).unwrap(), base);
    }

    #[test]
    fn tracker_runs_follow_goal_pattern(
        states in 1usize..=5,
        agents in 1usize..=3,
        seed in any::<u64>(),
        w_bits in 0u64..8,
        word in prop::collection::vec(0usize..64, 0..12),
    ) {
        let sys = random_system(states, agents, seed);
        let w = AgentSet::full(agents).intersection(AgentSet::from_bits(w_bits));
        let aw = build_aw(&sys, w);
        let word: Vec<usize> = word.iter().map(|d| d % sys.decision_count()).collect();
        let outsiders = AgentSet::full(agents).difference(w);
        let mut v = sys.init();
        let mut seen = sys.goals_at(v);
        let mut stuck = !seen.intersection(outsiders).is_empty();
        for &d in &word {
            v = sys.step(v, d);
            seen = seen.union(sys.goals_at(v));
            stuck |= !sys.goals_at(v).intersection(outsiders).is_empty();
        }
        match aw.run(&word) {
            None => prop_assert!(stuck),
            Some(run) => {
                prop_assert!(!stuck);
                let last = *run.last().unwrap();
                prop_assert_eq!(aw.trackers()[last].state, v);
                prop_assert_eq!(aw.is_accepting(last), w.is_subset(seen));
            }
        }
    }

    #[test]
    fn answers_match_brute_force_and_witnesses_certify(
        states in 1usize..=4,
        agents in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let sys = random_system(states, agents, seed);
        for w in AgentSet::all_subsets(agents) {
            let v = realize_explicit(&sys, w).unwrap();
            prop_assert_eq!(v.answer, brute_realize(&sys, w).unwrap());
            if let Some(word) = &v.witness {
                prop_assert!(certify_witness(&sys, w, word).unwrap());
                prop_assert!(word.len() <= v.automaton_states);
            }
        }
    }

    #[test]
    fn pruned_witnesses_are_accepted_before_pruning(
        states in 1usize..=5,
        agents in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let sys = random_system(states, agents, seed);
        for w in AgentSet::all_subsets(agents) {
            let full = build_aw(&sys, w);
            let pruned = prune(full.clone(), &solve_deviations(&sys, w));
            prop_assert!(pruned.state_count() <= full.state_count());
            if let Some(word) = nonempty(&pruned) {
                prop_assert!(pruned.accepts(&word));
                prop_assert!(full.accepts(&word));
            }
        }
    }
}
