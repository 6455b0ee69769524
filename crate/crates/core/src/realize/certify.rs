use std::collections::HashMap;

use crate::model::{winning_set, AgentSet, ExplicitSystem, LassoTrace};

use super::automaton::LassoWord;
use super::deviation::{build_deviation_game, SolvedDeviation};
use super::{check_coalition, RealizeError};

/// The trace a lasso word induces from the initial state, with the
/// (state, decision) pair taken at every step of its prefix and one cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedRun {
    pub trace: LassoTrace,
    pub pairs: Vec<(usize, usize)>,
}

/// Simulates `word` from the initial state until a (state, word position)
/// configuration repeats.
pub fn induced_run(sys: &ExplicitSystem, word: &LassoWord) -> Result<InducedRun, RealizeError> {
    if word.cycle.is_empty() {
        return Err(RealizeError::EmptyCycle);
    }
    let limit = sys.decision_count();
    if let Some(&index) = word.prefix.iter().chain(&word.cycle).find(|&&d| d >= limit) {
        return Err(RealizeError::BadDecision { index, limit });
    }
    let p = word.prefix.len();
    let total = word.len();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states = Vec::new();
    let mut pairs = Vec::new();
    let (mut v, mut pos) = (sys.init(), 0usize);
    let start = loop {
        if let Some(&first) = seen.get(&(v, pos)) {
            break first;
        }
        seen.insert((v, pos), states.len());
        let d = word.letter(pos);
        states.push(v);
        pairs.push((v, d));
        v = sys.step(v, d);
        pos = if pos + 1 < total { pos + 1 } else { p };
    };
    let cycle = states.split_off(start);
    Ok(InducedRun {
        trace: LassoTrace::new(states, cycle),
        pairs,
    })
}

/// States and decisions along a witness that a losing agent cannot exploit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Receipt {
    pub agent: usize,
    /// Distinct (state, decision) pairs of the run, in order of first use,
    /// each with both the state and the pair outside the agent's winning region.
    pub pairs: Vec<(usize, usize)>,
}

/// Evidence for a positive realizability answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub trace: LassoTrace,
    pub winning_set: AgentSet,
    pub receipts: Vec<Receipt>,
}

impl Certificate {
    pub(super) fn build(
        sys: &ExplicitSystem,
        word: &LassoWord,
        solved: &[SolvedDeviation],
    ) -> Result<Self, RealizeError> {
        let run = induced_run(sys, word)?;
        let winning = winning_set(sys, &run.trace)?;
        let mut distinct = Vec::new();
        for &pair in &run.pairs {
            if !distinct.contains(&pair) {
                distinct.push(pair);
            }
        }
        let receipts = solved
            .iter()
            .map(|s| Receipt {
                agent: s.agent(),
                pairs: distinct
                    .iter()
                    .copied()
                    .filter(|&(v, d)| !s.dangerous_state(v) && !s.dangerous_pair(v, d))
                    .collect(),
            })
            .collect();
        Ok(Certificate {
            trace: run.trace,
            winning_set: winning,
            receipts,
        })
    }
}

/// Checks a witness from scratch: the induced trace must have winning set
/// exactly `w`, and no agent outside `w` may be able to force its goal from
/// any state or announced decision along the run.
pub fn certify_witness(
    sys: &ExplicitSystem,
    w: AgentSet,
    word: &LassoWord,
) -> Result<bool, RealizeError> {
    check_coalition(sys.agent_count(), w)?;
    let run = induced_run(sys, word)?;
    if winning_set(sys, &run.trace)? != w {
        return Ok(false);
    }
    for j in (0..sys.agent_count()).filter(|&j| !w.contains(j)) {
        let solved = build_deviation_game(sys, j).solve();
        let safe = run
            .pairs
            .iter()
            .all(|&(v, d)| !solved.dangerous_state(v) && !solved.dangerous_pair(v, d));
        if !safe {
            return Ok(false);
        }
    }
    Ok(true)
}
