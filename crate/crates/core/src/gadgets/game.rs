use crate::game::{Player, ReachabilityGame};
use crate::model::{AgentSet, ExplicitSystem};

use super::GadgetError;

fn fresh_name(taken: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Two-agent system in which each agent steers the game at the states it
/// owns by naming a successor.
///
/// Both agents choose among the game states. The owner's choice is followed
/// when it names an edge; otherwise play falls into the owner's penalty sink
/// (`hat0` for the reacher, `hat1` for the avoider). Agent 0's goal is the
/// game goal plus `hat1`; agent 1 has no goal. Returns the system and the
/// empty coalition: an equilibrium where nobody wins exists exactly when the
/// avoider wins the game.
///
/// A one-state game gets an extra action `pass` that is never an edge, since
/// every agent needs at least two actions.
pub fn game_to_system(g: &ReachabilityGame) -> Result<(ExplicitSystem, AgentSet), GadgetError> {
    let init = g.init().ok_or(GadgetError::MissingInit)?;
    let n = g.state_count();
    let mut states: Vec<String> = g.names().to_vec();
    let hat0 = fresh_name(&states, "hat0");
    states.push(hat0);
    let hat1 = fresh_name(&states, "hat1");
    states.push(hat1);
    let mut actions: Vec<String> = g.names().to_vec();
    if n == 1 {
        actions.push(fresh_name(&actions, "pass"));
    }
    let m = actions.len();
    let (h0, h1) = (n, n + 1);
    let mut table = Vec::with_capacity((n + 2) * m * m);
    for v in 0..n + 2 {
        for a0 in 0..m {
            for a1 in 0..m {
                let t = if v >= n {
                    v
                } else {
                    let (choice, sink) = match g.owner(v) {
                        Player::Reacher => (a0, h0),
                        Player::Avoider => (a1, h1),
                    };
                    if choice < n && g.successors(v).contains(&choice) {
                        choice
                    } else {
                        sink
                    }
                };
                table.push(t);
            }
        }
    }
    let mut goal0: Vec<usize> = (0..n).filter(|&v| g.is_goal(v)).collect();
    goal0.push(h1);
    let sys = ExplicitSystem::from_table(
        states,
        init,
        vec![actions.clone(), actions],
        vec![goal0, Vec::new()],
        table,
    )
    .map_err(|mut errs| GadgetError::Model(errs.remove(0)))?;
    Ok((sys, AgentSet::empty()))
}
