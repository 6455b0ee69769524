mod common;

use common::fixture;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wnash::game::{play, solve, who_wins, Player};
use wnash::io::parse_game;
use wnash::oracle::gen_random_game;

#[test]
fn fixture_games() {
    let chain = parse_game(&fixture("chain.game")).unwrap();
    assert_eq!(who_wins(&chain).unwrap(), Player::Reacher);
    let diamond = parse_game(&fixture("diamond.game")).unwrap();
    assert_eq!(who_wins(&diamond).unwrap(), Player::Avoider);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partition_is_a_fixed_point(
        states in 1usize..=10,
        density in 0.0f64..0.6,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gen_random_game(&mut rng, states, density);
        let p = solve(&g);
        let mut all: Vec<usize> = p.win0().into_iter().chain(p.win1()).collect();
        all.sort();
        prop_assert_eq!(all, (0..states).collect::<Vec<_>>());
        for v in p.win1() {
            let succ = g.successors(v);
            prop_assert!(!g.is_goal(v));
            match g.owner(v) {
                Player::Avoider => prop_assert!(succ.iter().any(|&w| p.in_win1(w))),
                Player::Reacher => prop_assert!(succ.iter().all(|&w| p.in_win1(w))),
            }
        }
    }

    #[test]
    fn enlarging_the_goal_never_shrinks_the_reacher_region(
        states in 1usize..=10,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gen_random_game(&mut rng, states, 0.2);
        let mut goal: Vec<bool> = (0..states).map(|v| g.is_goal(v)).collect();
        for slot in goal.iter_mut() {
            *slot |= rng.gen_bool(0.3);
        }
        let bigger = g.with_goal(goal);
        let (small, large) = (solve(&g), solve(&bigger));
        for v in small.win0() {
            prop_assert!(large.in_win0(v));
        }
    }

    #[test]
    fn random_opponents_never_beat_the_winner(states in 1usize..=10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gen_random_game(&mut rng, states, 0.3);
        let p = solve(&g);
        for start in 0..states {
            for _ in 0..20 {
                let mut opponent = |_: usize, succ: &[usize]| succ[rng.gen_range(0..succ.len())];
                let path = play(&g, &p, start, &mut opponent).unwrap();
                prop_assert_eq!(path.iter().any(|&v| g.is_goal(v)), p.in_win0(start));
            }
        }
    }
}
