use crate::game::{solve, Player, ReachabilityGame, WinPartition};
use crate::model::ExplicitSystem;

/// Turn-based game in which the coalition announces decisions and agent
/// `agent` may replace its own component, trying to reach its goal.
///
/// Coalition (avoider) nodes are the system states reachable from the initial
/// state, in ascending order; deviator (reacher) nodes are the pairs of such
/// a state with a decision.
#[derive(Debug, Clone)]
pub struct DeviationGame {
    agent: usize,
    states: Vec<usize>,
    position: Vec<Option<usize>>,
    decision_count: usize,
    game: ReachabilityGame,
}

impl DeviationGame {
    pub fn agent(&self) -> usize {
        self.agent
    }

    pub fn game(&self) -> &ReachabilityGame {
        &self.game
    }

    /// System states present in the game, ascending.
    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn state_node(&self, v: usize) -> Option<usize> {
        self.position.get(v).copied().flatten()
    }

    pub fn pair_node(&self, v: usize, d: usize) -> Option<usize> {
        self.state_node(v)
            .map(|p| self.states.len() + p * self.decision_count + d)
    }

    pub fn solve(self) -> SolvedDeviation {
        let partition = solve(&self.game);
        SolvedDeviation {
            game: self,
            partition,
        }
    }
}

/// Builds the deviation game for agent `j` over the reachable part of `sys`.
pub fn build_deviation_game(sys: &ExplicitSystem, j: usize) -> DeviationGame {
    let states = sys.reachable_states();
    let mut position = vec![None; sys.state_count()];
    for (p, &v) in states.iter().enumerate() {
        position[v] = Some(p);
    }
    let n = states.len();
    let dc = sys.decision_count();
    let total = n + n * dc;
    let mut owner = Vec::with_capacity(total);
    let mut succ = Vec::with_capacity(total);
    let mut goal = Vec::with_capacity(total);
    for (p, &v) in states.iter().enumerate() {
        owner.push(Player::Avoider);
        succ.push((0..dc).map(|d| n + p * dc + d).collect());
        goal.push(sys.in_goal(j, v));
    }
    for &v in &states {
        for d in 0..dc {
            owner.push(Player::Reacher);
            let targets = (0..sys.action_count(j))
                .map(|a| {
                    let w = sys.step(v, sys.with_component(d, j, a));
                    position[w].expect("reachable states are closed under steps")
                })
                .collect();
            succ.push(targets);
            goal.push(false);
        }
    }
    let mut names: Vec<String> = states
        .iter()
        .map(|&v| sys.state_name(v).to_string())
        .collect();
    for &v in &states {
        for d in 0..dc {
            names.push(format!("{}@{}", sys.state_name(v), sys.decision_name(d)));
        }
    }
    let game = ReachabilityGame::with_names(names, owner, position[sys.init()], succ, goal)
        .expect("deviation games are total by construction");
    DeviationGame {
        agent: j,
        states,
        position,
        decision_count: dc,
        game,
    }
}

/// A deviation game with its winning regions.
#[derive(Debug, Clone)]
pub struct SolvedDeviation {
    pub game: DeviationGame,
    pub partition: WinPartition,
}

impl SolvedDeviation {
    pub fn agent(&self) -> usize {
        self.game.agent
    }

    /// The deviator can force its goal from state `v`.
    pub fn dangerous_state(&self, v: usize) -> bool {
        self.game
            .state_node(v)
            .is_some_and(|x| self.partition.in_win0(x))
    }

    /// The deviator can force its goal once decision `d` is announced at `v`.
    pub fn dangerous_pair(&self, v: usize, d: usize) -> bool {
        self.game
            .pair_node(v, d)
            .is_some_and(|x| self.partition.in_win0(x))
    }
}
