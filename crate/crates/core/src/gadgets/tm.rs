//! Space-bounded Turing machines: deterministic and alternating variants,
//! instantaneous descriptions, single steps and acceptance oracles.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::game::{solve, Player, ReachabilityGame};

use super::GadgetError;

/// Characters that may not appear in machine state or symbol names, since
/// generated systems compose names from them.
pub const RESERVED_NAME_CHARS: &[char] = &[',', ':', ';', '#', '@', '=', '/', '.', '^', '<', '>'];

pub(crate) fn check_name(name: &str) -> Result<(), GadgetError> {
    if name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || RESERVED_NAME_CHARS.contains(&c))
    {
        return Err(GadgetError::BadName(name.to_string()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Left,
    Right,
}

impl Dir {
    pub fn letter(self) -> &'static str {
        match self {
            Dir::Left => "L",
            Dir::Right => "R",
        }
    }

    pub fn from_letter(s: &str) -> Option<Dir> {
        match s {
            "L" => Some(Dir::Left),
            "R" => Some(Dir::Right),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Dir::Left => 0,
            Dir::Right => 1,
        }
    }
}

/// New control state, symbol written under the head, and head direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub state: usize,
    pub symbol: usize,
    pub dir: Dir,
}

impl Move {
    pub fn new(state: usize, symbol: usize, dir: Dir) -> Self {
        Move { state, symbol, dir }
    }
}

fn check_common(
    states: &[String],
    symbols: &[String],
    init: usize,
    delta: &[(usize, usize, Move)],
) -> Result<(), GadgetError> {
    if states.is_empty() {
        return Err(GadgetError::Empty("states"));
    }
    if symbols.is_empty() {
        return Err(GadgetError::Empty("symbols"));
    }
    let mut seen = HashSet::new();
    for name in states.iter().chain(symbols) {
        check_name(name)?;
    }
    for s in states {
        if !seen.insert(s) {
            return Err(GadgetError::Duplicate(s.clone()));
        }
    }
    seen.clear();
    for s in symbols {
        if !seen.insert(s) {
            return Err(GadgetError::Duplicate(s.clone()));
        }
    }
    if init >= states.len() {
        return Err(GadgetError::OutOfRange("initial state"));
    }
    for &(r, s, m) in delta {
        if r >= states.len() || m.state >= states.len() {
            return Err(GadgetError::OutOfRange("transition state"));
        }
        if s >= symbols.len() || m.symbol >= symbols.len() {
            return Err(GadgetError::OutOfRange("transition symbol"));
        }
    }
    Ok(())
}

/// Deterministic machine. Symbol 0 is the blank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetTM {
    states: Vec<String>,
    symbols: Vec<String>,
    init: usize,
    accepting: Vec<bool>,
    delta: Vec<Option<Move>>,
}

impl DetTM {
    /// `delta` lists `(state, read symbol, move)`; it must cover every
    /// non-accepting state and symbol exactly once.
    pub fn new(
        states: Vec<String>,
        symbols: Vec<String>,
        init: usize,
        accepting: &[usize],
        delta: &[(usize, usize, Move)],
    ) -> Result<Self, GadgetError> {
        check_common(&states, &symbols, init, delta)?;
        let g = symbols.len();
        let mut acc = vec![false; states.len()];
        for &r in accepting {
            *acc.get_mut(r)
                .ok_or(GadgetError::OutOfRange("accepting state"))? = true;
        }
        let mut table = vec![None; states.len() * g];
        for &(r, s, m) in delta {
            if table[r * g + s].replace(m).is_some() {
                return Err(GadgetError::DuplicateTransition {
                    state: states[r].clone(),
                    symbol: symbols[s].clone(),
                });
            }
        }
        for r in 0..states.len() {
            for s in 0..g {
                if !acc[r] && table[r * g + s].is_none() {
                    return Err(GadgetError::MissingTransition {
                        state: states[r].clone(),
                        symbol: symbols[s].clone(),
                    });
                }
            }
        }
        Ok(DetTM {
            states,
            symbols,
            init,
            accepting: acc,
            delta: table,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn is_accepting(&self, r: usize) -> bool {
        self.accepting[r]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.states.len())
            .filter(|&r| self.accepting[r])
            .collect()
    }

    /// Transition on reading `symbol` in `state`; `None` only for accepting states.
    pub fn delta(&self, state: usize, symbol: usize) -> Option<Move> {
        self.delta[state * self.symbols.len() + symbol]
    }

    /// Every defined transition as `(state, symbol, move)`, in table order.
    pub fn transitions(&self) -> Vec<(usize, usize, Move)> {
        let g = self.symbols.len();
        (0..self.delta.len())
            .filter_map(|i| self.delta[i].map(|m| (i / g, i % g, m)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Accept,
    Reject,
    Exists,
    Forall,
    Det,
}

impl Label {
    pub fn keyword(self) -> &'static str {
        match self {
            Label::Accept => "accept",
            Label::Reject => "reject",
            Label::Exists => "or",
            Label::Forall => "and",
            Label::Det => "det",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Label> {
        Some(match s {
            "accept" => Label::Accept,
            "reject" => Label::Reject,
            "or" => Label::Exists,
            "and" => Label::Forall,
            "det" => Label::Det,
            _ => return None,
        })
    }
}

/// Alternating machine with at most two moves per (state, symbol).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltTM {
    states: Vec<String>,
    symbols: Vec<String>,
    init: usize,
    labels: Vec<Label>,
    delta: Vec<Vec<Move>>,
}

impl AltTM {
    pub fn new(
        states: Vec<String>,
        symbols: Vec<String>,
        init: usize,
        labels: Vec<Label>,
        delta: &[(usize, usize, Move)],
    ) -> Result<Self, GadgetError> {
        check_common(&states, &symbols, init, delta)?;
        if labels.len() != states.len() {
            return Err(GadgetError::OutOfRange("state labels"));
        }
        let g = symbols.len();
        let mut table = vec![Vec::new(); states.len() * g];
        for &(r, s, m) in delta {
            let slot = &mut table[r * g + s];
            if slot.contains(&m) {
                return Err(GadgetError::DuplicateTransition {
                    state: states[r].clone(),
                    symbol: symbols[s].clone(),
                });
            }
            slot.push(m);
            if slot.len() > 2 {
                return Err(GadgetError::Branching {
                    state: states[r].clone(),
                    symbol: symbols[s].clone(),
                });
            }
        }
        for r in 0..states.len() {
            if labels[r] == Label::Det {
                for s in 0..g {
                    if table[r * g + s].len() != 1 {
                        return Err(GadgetError::MissingTransition {
                            state: states[r].clone(),
                            symbol: symbols[s].clone(),
                        });
                    }
                }
            }
        }
        Ok(AltTM {
            states,
            symbols,
            init,
            labels,
            delta: table,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn label(&self, r: usize) -> Label {
        self.labels[r]
    }

    pub fn moves(&self, state: usize, symbol: usize) -> &[Move] {
        &self.delta[state * self.symbols.len() + symbol]
    }

    /// Every transition as `(state, symbol, move)`, in table order.
    pub fn transitions(&self) -> Vec<(usize, usize, Move)> {
        let g = self.symbols.len();
        let mut out = Vec::new();
        for (i, ms) in self.delta.iter().enumerate() {
            for &m in ms {
                out.push((i / g, i % g, m));
            }
        }
        out
    }
}

/// Instantaneous description of a machine on a tape of fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MachineId {
    pub tape: Vec<usize>,
    pub head: usize,
    pub state: usize,
}

impl MachineId {
    /// Blank tape of `n` cells with the head on cell 0.
    pub fn initial(n: usize, state: usize) -> Self {
        MachineId {
            tape: vec![0; n],
            head: 0,
            state,
        }
    }

    /// Builds an ID from cells of (symbol, optional state); exactly one cell
    /// must carry a state.
    pub fn from_cells(cells: &[(usize, Option<usize>)]) -> Result<Self, GadgetError> {
        let heads: Vec<usize> = (0..cells.len()).filter(|&c| cells[c].1.is_some()).collect();
        if heads.len() != 1 {
            return Err(GadgetError::MalformedId(format!(
                "{} cells carry the head",
                heads.len()
            )));
        }
        Ok(MachineId {
            tape: cells.iter().map(|c| c.0).collect(),
            head: heads[0],
            state: cells[heads[0]].1.expect("head cell"),
        })
    }

    pub fn to_cells(&self) -> Vec<(usize, Option<usize>)> {
        self.tape
            .iter()
            .enumerate()
            .map(|(c, &s)| (s, (c == self.head).then_some(self.state)))
            .collect()
    }

    fn check(&self, states: usize, symbols: usize) -> Result<(), GadgetError> {
        if self.head >= self.tape.len() {
            return Err(GadgetError::MalformedId("head off the tape".into()));
        }
        if self.state >= states {
            return Err(GadgetError::MalformedId("unknown state".into()));
        }
        if self.tape.iter().any(|&s| s >= symbols) {
            return Err(GadgetError::MalformedId("unknown symbol".into()));
        }
        Ok(())
    }

    /// Renders cells separated by `, ` with the head cell as `<symbol,state>`.
    pub fn render(&self, states: &[String], symbols: &[String]) -> String {
        self.to_cells()
            .iter()
            .map(|&(s, r)| match r {
                Some(r) => format!("<{},{}>", symbols[s], states[r]),
                None => symbols[s].clone(),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Parses the output of [`MachineId::render`].
    pub fn parse(text: &str, states: &[String], symbols: &[String]) -> Result<Self, GadgetError> {
        let bad = |what: &str| GadgetError::MalformedId(what.to_string());
        let sym = |s: &str| symbols.iter().position(|x| x == s).ok_or_else(|| bad(s));
        let mut cells = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            if let Some(inner) = rest.strip_prefix('<') {
                let close = inner.find('>').ok_or_else(|| bad("unclosed head cell"))?;
                let (s, r) = inner[..close]
                    .split_once(',')
                    .ok_or_else(|| bad("head cell needs symbol and state"))?;
                let r = states
                    .iter()
                    .position(|x| x == r.trim())
                    .ok_or_else(|| bad(r))?;
                cells.push((sym(s.trim())?, Some(r)));
                rest = inner[close + 1..].trim_start();
            } else {
                let end = rest.find(',').unwrap_or(rest.len());
                cells.push((sym(rest[..end].trim())?, None));
                rest = &rest[end..];
            }
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        }
        Self::from_cells(&cells)
    }

    /// Applies a move; `None` when the head would leave the tape.
    pub fn apply(&self, m: Move) -> Option<MachineId> {
        let head = match m.dir {
            Dir::Left => self.head.checked_sub(1)?,
            Dir::Right => Some(self.head + 1).filter(|&h| h < self.tape.len())?,
        };
        let mut tape = self.tape.clone();
        tape[self.head] = m.symbol;
        Some(MachineId {
            tape,
            head,
            state: m.state,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Next(MachineId),
    Accept,
    OutOfBounds,
}

impl fmt::Display for StepOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepOutcome::Next(id) => write!(f, "next {id:?}"),
            StepOutcome::Accept => write!(f, "accept"),
            StepOutcome::OutOfBounds => write!(f, "out of bounds"),
        }
    }
}

/// One step of a deterministic machine. Acceptance is checked before moving.
pub fn tm_step(m: &DetTM, id: &MachineId) -> Result<StepOutcome, GadgetError> {
    id.check(m.states.len(), m.symbols.len())?;
    if m.is_accepting(id.state) {
        return Ok(StepOutcome::Accept);
    }
    let mv = m
        .delta(id.state, id.tape[id.head])
        .expect("transitions total on non-accepting states");
    Ok(match id.apply(mv) {
        Some(next) => StepOutcome::Next(next),
        None => StepOutcome::OutOfBounds,
    })
}

/// Whether the machine accepts the empty tape of `n` cells.
pub fn dtm_accepts(m: &DetTM, n: usize) -> bool {
    let mut id = MachineId::initial(n, m.init());
    let mut seen = HashSet::new();
    while seen.insert(id.clone()) {
        match tm_step(m, &id).expect("simulation keeps IDs well formed") {
            StepOutcome::Accept => return true,
            StepOutcome::OutOfBounds => return false,
            StepOutcome::Next(next) => id = next,
        }
    }
    false
}

/// Whether the alternating machine accepts the empty tape of `n` cells,
/// decided by solving the reachability game on its configurations.
///
/// Existential and deterministic configurations belong to the reacher,
/// universal ones to the avoider. Moves off the tape lead to a rejecting
/// sink; a configuration without moves rejects if existential and accepts if
/// universal.
pub fn atm_accepts(m: &AltTM, n: usize, cap: usize) -> Result<bool, GadgetError> {
    const ACC: usize = 0;
    const REJ: usize = 1;
    let mut index: HashMap<MachineId, usize> = HashMap::new();
    let mut ids: Vec<MachineId> = Vec::new();
    let mut owner = vec![Player::Reacher, Player::Reacher];
    let mut succ: Vec<Vec<usize>> = vec![vec![ACC], vec![REJ]];
    let mut goal = vec![true, false];
    let start = MachineId::initial(n, m.init());
    index.insert(start.clone(), 2);
    ids.push(start);
    owner.push(Player::Reacher);
    succ.push(Vec::new());
    goal.push(false);
    let mut queue = VecDeque::from([2usize]);
    while let Some(node) = queue.pop_front() {
        let id = ids[node - 2].clone();
        let label = m.label(id.state);
        let mut targets = Vec::new();
        match label {
            Label::Accept => {
                goal[node] = true;
                targets.push(node);
            }
            Label::Reject => targets.push(node),
            Label::Exists | Label::Det | Label::Forall => {
                for &mv in m.moves(id.state, id.tape[id.head]) {
                    match id.apply(mv) {
                        None => targets.push(REJ),
                        Some(next) => {
                            let t = match index.get(&next) {
                                Some(&t) => t,
                                None => {
                                    if ids.len() >= cap {
                                        return Err(GadgetError::CapExceeded(cap));
                                    }
                                    let t = ids.len() + 2;
                                    index.insert(next.clone(), t);
                                    ids.push(next);
                                    owner.push(Player::Reacher);
                                    succ.push(Vec::new());
                                    goal.push(false);
                                    queue.push_back(t);
                                    t
                                }
                            };
                            targets.push(t);
                        }
                    }
                }
                if targets.is_empty() {
                    targets.push(if label == Label::Forall { ACC } else { REJ });
                }
            }
        }
        owner[node] = if label == Label::Forall {
            Player::Avoider
        } else {
            Player::Reacher
        };
        succ[node] = targets;
    }
    let game = ReachabilityGame::new(owner, Some(2), succ, goal)
        .expect("configuration games are total by construction");
    Ok(solve(&game).in_win0(2))
}
