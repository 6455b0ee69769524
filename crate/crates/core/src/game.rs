//! Turn-based two-player reachability games and their attractor solution.
//!
//! The reacher (player 0) wins a play that visits a goal state; the avoider
//! (player 1) wins every other play.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Reacher,
    Avoider,
}

impl Player {
    pub fn index(self) -> usize {
        match self {
            Player::Reacher => 0,
            Player::Avoider => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("state `{0}` has no outgoing edge")]
    DeadEndState(String),
    #[error("state `{0}` is owned by both players")]
    OverlappingOwnership(String),
    #[error("state `{0}` is owned by neither player")]
    UnownedState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("game has no initial state")]
    MissingInit,
    #[error("opponent moved from {from} to {to}, which is not an edge")]
    IllegalOpponentMove { from: usize, to: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityGame {
    names: Vec<String>,
    owner: Vec<Player>,
    init: Option<usize>,
    succ: Vec<Vec<usize>>,
    goal: Vec<bool>,
}

impl ReachabilityGame {
    /// Builds a game from index data. Successor lists are sorted and
    /// deduplicated; states are named `v0`, `v1`, … unless renamed.
    pub fn new(
        owner: Vec<Player>,
        init: Option<usize>,
        succ: Vec<Vec<usize>>,
        goal: Vec<bool>,
    ) -> Result<Self, Vec<GameError>> {
        let names = (0..owner.len()).map(|i| format!("v{i}")).collect();
        Self::with_names(names, owner, init, succ, goal)
    }

    pub fn with_names(
        names: Vec<String>,
        owner: Vec<Player>,
        init: Option<usize>,
        mut succ: Vec<Vec<usize>>,
        goal: Vec<bool>,
    ) -> Result<Self, Vec<GameError>> {
        let n = owner.len();
        let mut errors = Vec::new();
        for (what, len) in [
            ("state name", names.len()),
            ("successor list", succ.len()),
            ("goal flag", goal.len()),
        ] {
            if len != n {
                errors.push(GameError::IndexOutOfRange {
                    what,
                    index: len,
                    limit: n,
                });
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        if let Some(i) = init {
            if i >= n {
                errors.push(GameError::IndexOutOfRange {
                    what: "initial state",
                    index: i,
                    limit: n,
                });
            }
        }
        for (v, list) in succ.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                errors.push(GameError::DeadEndState(names[v].clone()));
            }
            if let Some(&w) = list.iter().find(|&&w| w >= n) {
                errors.push(GameError::IndexOutOfRange {
                    what: "edge target",
                    index: w,
                    limit: n,
                });
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(ReachabilityGame {
            names,
            owner,
            init,
            succ,
            goal,
        })
    }

    pub fn state_count(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn init(&self) -> Option<usize> {
        self.init
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn is_goal(&self, v: usize) -> bool {
        self.goal[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Same graph with a different goal set.
    pub fn with_goal(&self, goal: Vec<bool>) -> Self {
        assert_eq!(goal.len(), self.state_count());
        ReachabilityGame {
            goal,
            ..self.clone()
        }
    }

    pub fn with_init(&self, init: Option<usize>) -> Self {
        ReachabilityGame {
            init,
            ..self.clone()
        }
    }
}

/// A game described by state names, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GameDescription {
    pub states: Vec<String>,
    pub reacher: Vec<String>,
    pub avoider: Vec<String>,
    pub init: Option<String>,
    pub goal: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl GameDescription {
    pub fn build(&self) -> Result<ReachabilityGame, Vec<GameError>> {
        let mut errors = Vec::new();
        let mut index = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                errors.push(GameError::DuplicateState(s.clone()));
            }
        }
        let n = self.states.len();
        let mut owner: Vec<Option<Player>> = vec![None; n];
        for (list, p) in [
            (&self.reacher, Player::Reacher),
            (&self.avoider, Player::Avoider),
        ] {
            for name in list {
                match index.get(name.as_str()) {
                    Some(&v) => {
                        if owner[v].is_some() {
                            errors.push(GameError::OverlappingOwnership(name.clone()));
                        }
                        owner[v] = Some(p);
                    }
                    None => errors.push(GameError::UnknownState(name.clone())),
                }
            }
        }
        for (v, o) in owner.iter().enumerate() {
            if o.is_none() {
                errors.push(GameError::UnownedState(self.states[v].clone()));
            }
        }
        let lookup = |name: &str, errors: &mut Vec<GameError>| match index.get(name) {
            Some(&v) => Some(v),
            None => {
                errors.push(GameError::UnknownState(name.to_string()));
                None
            }
        };
        let init = self
            .init
            .as_deref()
            .and_then(|name| lookup(name, &mut errors));
        let mut goal = vec![false; n];
        for name in &self.goal {
            if let Some(v) = lookup(name, &mut errors) {
                goal[v] = true;
            }
        }
        let mut succ = vec![Vec::new(); n];
        for (a, b) in &self.edges {
            if let (Some(u), Some(w)) = (lookup(a, &mut errors), lookup(b, &mut errors)) {
                succ[u].push(w);
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        ReachabilityGame::with_names(
            self.states.clone(),
            owner
                .into_iter()
                .map(|o| o.expect("checked above"))
                .collect(),
            init,
            succ,
            goal,
        )
    }
}

/// Winning regions of both players plus memoryless winning strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinPartition {
    rank: Vec<Option<usize>>,
    strategy: Vec<Option<usize>>,
}

impl WinPartition {
    pub fn winner(&self, v: usize) -> Player {
        if self.rank[v].is_some() {
            Player::Reacher
        } else {
            Player::Avoider
        }
    }

    pub fn in_win0(&self, v: usize) -> bool {
        self.rank[v].is_some()
    }

    pub fn in_win1(&self, v: usize) -> bool {
        self.rank[v].is_none()
    }

    pub fn win0(&self) -> Vec<usize> {
        (0..self.rank.len()).filter(|&v| self.in_win0(v)).collect()
    }

    pub fn win1(&self) -> Vec<usize> {
        (0..self.rank.len()).filter(|&v| self.in_win1(v)).collect()
    }

    /// Attractor layer of a reacher-winning state; goal states have rank 0.
    pub fn rank(&self, v: usize) -> Option<usize> {
        self.rank[v]
    }

    /// Move chosen by the winner at a state it owns and wins, if any.
    pub fn strategy(&self, v: usize) -> Option<usize> {
        self.strategy[v]
    }
}

/// Attractor computation in synchronous layers.
pub fn solve(g: &ReachabilityGame) -> WinPartition {
    let n = g.state_count();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        for &w in g.successors(v) {
            preds[w].push(v);
        }
    }
    let mut remaining: Vec<usize> = (0..n).map(|v| g.successors(v).len()).collect();
    let mut rank: Vec<Option<usize>> = vec![None; n];
    let mut layer: Vec<usize> = (0..n).filter(|&v| g.is_goal(v)).collect();
    for &v in &layer {
        rank[v] = Some(0);
    }
    let mut queued = vec![false; n];
    let mut r = 0;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &w in &layer {
            for &u in &preds[w] {
                if rank[u].is_some() || queued[u] {
                    continue;
                }
                let ready = match g.owner(u) {
                    Player::Reacher => true,
                    Player::Avoider => {
                        remaining[u] -= 1;
                        remaining[u] == 0
                    }
                };
                if ready {
                    queued[u] = true;
                    next.push(u);
                }
            }
        }
        r += 1;
        for &u in &next {
            rank[u] = Some(r);
        }
        layer = next;
    }
    let strategy = (0..n)
        .map(|v| match (g.owner(v), rank[v]) {
            (Player::Reacher, Some(rv)) if rv > 0 => g
                .successors(v)
                .iter()
                .copied()
                .filter(|&w| rank[w].is_some())
                .min_by_key(|&w| (rank[w], w)),
            (Player::Avoider, None) => g.successors(v).iter().copied().find(|&w| rank[w].is_none()),
            _ => None,
        })
        .collect();
    WinPartition { rank, strategy }
}

/// The player who wins from the initial state.
pub fn who_wins(g: &ReachabilityGame) -> Result<Player, GameError> {
    let init = g.init().ok_or(GameError::MissingInit)?;
    Ok(solve(g).winner(init))
}

/// Replays the winner's strategy from `init` against `opponent`, which is
/// asked for a move at every state the winner does not own.
///
/// If the reacher wins from `init` the play stops at the first goal state;
/// otherwise it runs for `|V| + 1` states.
pub fn play(
    g: &ReachabilityGame,
    partition: &WinPartition,
    init: usize,
    opponent: &mut dyn FnMut(usize, &[usize]) -> usize,
) -> Result<Vec<usize>, GameError> {
    if init >= g.state_count() {
        return Err(GameError::IndexOutOfRange {
            what: "initial state",
            index: init,
            limit: g.state_count(),
        });
    }
    let winner = partition.winner(init);
    let mut path = vec![init];
    let mut v = init;
    loop {
        match winner {
            Player::Reacher if g.is_goal(v) => break,
            Player::Avoider if path.len() > g.state_count() => break,
            _ => {}
        }
        let w = if g.owner(v) == winner {
            match partition.strategy(v) {
                Some(w) => w,
                // a winner-owned state that the winner does not win; only
                // reachable if the opponent leaves the winning region
                None => g.successors(v)[0],
            }
        } else {
            let w = opponent(v, g.successors(v));
            if !g.successors(v).contains(&w) {
                return Err(GameError::IllegalOpponentMove { from: v, to: w });
            }
            w
        };
        path.push(w);
        v = w;
    }
    Ok(path)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use Player::{Avoider, Reacher};

    pub(crate) fn two_state(goal_w: bool) -> ReachabilityGame {
        ReachabilityGame::with_names(
            vec!["u".into(), "w".into()],
            vec![Reacher, Avoider],
            Some(0),
            vec![vec![1], vec![0]],
            vec![false, goal_w],
        )
        .unwrap()
    }

    /// w (avoider) -> x or s; x -> r; r and s loop; goal {r}.
    pub(crate) fn diamond() -> ReachabilityGame {
        ReachabilityGame::with_names(
            vec!["w".into(), "x".into(), "r".into(), "s".into()],
            vec![Avoider, Reacher, Reacher, Reacher],
            Some(0),
            vec![vec![1, 3], vec![2], vec![2], vec![3]],
            vec![false, false, true, false],
        )
        .unwrap()
    }

    #[test]
    fn two_state_reachable_goal() {
        let p = solve(&two_state(true));
        assert_eq!(p.win0(), vec![0, 1]);
        assert_eq!(p.strategy(0), Some(1));
    }

    #[test]
    fn two_state_empty_goal() {
        let p = solve(&two_state(false));
        assert!(p.win0().is_empty());
        assert_eq!(p.win1(), vec![0, 1]);
    }

    #[test]
    fn diamond_avoider_escapes() {
        let g = diamond();
        let p = solve(&g);
        assert!(p.in_win1(0));
        assert_eq!(p.win0(), vec![1, 2]);
        assert_eq!(p.rank(1), Some(1));
        assert_eq!(p.strategy(0), Some(3));
        assert_eq!(who_wins(&g), Ok(Avoider));
    }

    #[test]
    fn who_wins_examples() {
        assert_eq!(who_wins(&diamond().with_init(Some(2))), Ok(Reacher));
        assert_eq!(who_wins(&two_state(true)), Ok(Reacher));
        assert_eq!(
            who_wins(&two_state(true).with_init(None)),
            Err(GameError::MissingInit)
        );
    }

    #[test]
    fn play_examples() {
        let g = diamond();
        let p = solve(&g);
        let path = play(&g, &p, 0, &mut |_, s| s[0]).unwrap();
        assert_eq!(path.len(), 5);
        assert!(path.iter().all(|&v| !g.is_goal(v)));
        assert_eq!(play(&g, &p, 2, &mut |_, s| s[0]).unwrap(), vec![2]);
        let g2 = two_state(true);
        assert_eq!(
            play(&g2, &solve(&g2), 0, &mut |_, s| s[0]).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn play_rejects_illegal_opponent() {
        let g = two_state(true);
        let p = solve(&g);
        // from w the reacher wins; the avoider at w must move to u
        let err = play(&g, &p, 1, &mut |_, _| 1);
        assert_eq!(err, Ok(vec![1]));
        let g = diamond();
        let p = solve(&g);
        let err = play(&g, &p, 1, &mut |_, _| 0);
        assert_eq!(err, Ok(vec![1, 2]));
        let g = two_state(false);
        let err = play(&g, &solve(&g), 1, &mut |_, _| 0);
        assert_eq!(err, Err(GameError::IllegalOpponentMove { from: 0, to: 0 }));
    }

    #[test]
    fn rejects_dead_ends() {
        let err = ReachabilityGame::new(vec![Reacher], None, vec![vec![]], vec![false]);
        assert_eq!(err, Err(vec![GameError::DeadEndState("v0".into())]));
    }

    #[test]
    fn description_checks_ownership() {
        let d = GameDescription {
            states: vec!["u".into(), "w".into()],
            reacher: vec!["u".into(), "w".into()],
            avoider: vec!["w".into()],
            init: Some("u".into()),
            goal: vec![],
            edges: vec![("u".into(), "w".into()), ("w".into(), "u".into())],
        };
        assert_eq!(
            d.build(),
            Err(vec![GameError::OverlappingOwnership("w".into())])
        );
    }
}
