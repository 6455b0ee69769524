use crate::model::{AgentSet, ExplicitSystem, ExplicitTransducer, StrategyProfile};

use super::tm::{DetTM, Dir, Move};
use super::GadgetError;

/// Indexing of the turn-based system built from a machine.
struct Layout {
    n: usize,
    states: usize,
    symbols: usize,
}

impl Layout {
    fn action_count(&self) -> usize {
        self.states * self.symbols * 2
    }

    fn action(&self, m: Move) -> usize {
        (m.state * self.symbols + m.symbol) * 2 + m.dir.index()
    }

    fn decode_action(&self, a: usize) -> Move {
        let dir = if a % 2 == 1 { Dir::Right } else { Dir::Left };
        let rest = a / 2;
        Move::new(rest / self.symbols, rest % self.symbols, dir)
    }

    fn announcement(&self, cell: usize, a: usize) -> usize {
        self.n + cell * self.action_count() + a
    }

    fn accept(&self) -> usize {
        self.n + self.n * self.action_count()
    }

    fn reject(&self) -> usize {
        self.accept() + 1
    }

    fn state_count(&self) -> usize {
        self.reject() + 1
    }

    /// `(cell, move)` for an announcement state.
    fn decode_state(&self, v: usize) -> Option<(usize, Move)> {
        if v < self.n || v >= self.accept() {
            return None;
        }
        let k = v - self.n;
        Some((
            k / self.action_count(),
            self.decode_action(k % self.action_count()),
        ))
    }

    fn target(cell: usize, dir: Dir, n: usize) -> Option<usize> {
        match dir {
            Dir::Left => cell.checked_sub(1),
            Dir::Right => Some(cell + 1).filter(|&c| c < n),
        }
    }
}

/// Partial view of a configuration: the symbols of a window of cells and
/// the head, if it lies inside the window.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SubId {
    tape: Vec<usize>,
    head: Option<(usize, usize)>,
}

/// Turn-based system in which agent i keeps track of cells i−1..i+1 and
/// moves the machine whenever the head is on cell i.
///
/// States `h{i}` say the head is on cell i and it is agent i's turn; only
/// that agent's action is read there. Actions name a move as
/// `state/symbol/L|R`. The chosen move is announced through a state
/// `m{i}/state/symbol/L|R`, from which play continues at the next head
/// position, or ends in `accept` (new state accepting) or `reject` (head
/// leaves the tape). Every agent's goal is `accept`.
///
/// Each agent's transducer follows announcements touching its window and
/// plays the machine's move when the head is on its own cell. The returned
/// profile is an equilibrium for the full coalition exactly when the
/// machine accepts the blank tape of `n` cells.
pub fn dtm_to_turnbased(
    m: &DetTM,
    n: usize,
) -> Result<(ExplicitSystem, StrategyProfile, AgentSet), GadgetError> {
    if n < 2 {
        return Err(GadgetError::TapeTooShort { min: 2, got: n });
    }
    let l = Layout {
        n,
        states: m.states().len(),
        symbols: m.symbols().len(),
    };
    let na = l.action_count();
    let mut actions = Vec::with_capacity(na);
    for a in 0..na {
        let mv = l.decode_action(a);
        actions.push(format!(
            "{}/{}/{}",
            m.states()[mv.state],
            m.symbols()[mv.symbol],
            mv.dir.letter()
        ));
    }
    let mut names: Vec<String> = (0..n).map(|i| format!("h{i}")).collect();
    for i in 0..n {
        names.extend(actions.iter().map(|a| format!("m{i}/{a}")));
    }
    names.push("accept".into());
    names.push("reject".into());

    let decisions = na.pow(n as u32);
    let stride = |i: usize| na.pow((n - 1 - i) as u32);
    let mut table = Vec::with_capacity(l.state_count() * decisions);
    for v in 0..l.state_count() {
        if v < n {
            let s = stride(v);
            table.extend((0..decisions).map(|d| l.announcement(v, (d / s) % na)));
            continue;
        }
        let t = match l.decode_state(v) {
            None => v,
            Some((cell, mv)) => match Layout::target(cell, mv.dir, n) {
                None => l.reject(),
                Some(_) if m.is_accepting(mv.state) => l.accept(),
                Some(next) => next,
            },
        };
        table.extend(std::iter::repeat_n(t, decisions));
    }
    let sys =
        ExplicitSystem::from_table(names, 0, vec![actions; n], vec![vec![l.accept()]; n], table)
            .map_err(|mut e| GadgetError::Model(e.remove(0)))?;
    let profile = (0..n).map(|i| agent_transducer(m, &l, i)).collect();
    Ok((sys, StrategyProfile::Explicit(profile), AgentSet::full(n)))
}

fn agent_transducer(m: &DetTM, l: &Layout, agent: usize) -> ExplicitTransducer {
    let lo = agent.saturating_sub(1);
    let hi = (agent + 1).min(l.n - 1);
    let width = hi - lo + 1;
    let head_codes = 1 + width * l.states;
    let tapes = l.symbols.pow(width as u32);
    let count = tapes * head_codes;
    let encode = |s: &SubId| {
        let tape = s.tape.iter().fold(0, |acc, &x| acc * l.symbols + x);
        let head = s.head.map_or(0, |(c, r)| 1 + (c - lo) * l.states + r);
        tape * head_codes + head
    };
    let decode = |k: usize| {
        let (mut tape_code, head) = (k / head_codes, k % head_codes);
        let mut tape = vec![0; width];
        for x in tape.iter_mut().rev() {
            *x = tape_code % l.symbols;
            tape_code /= l.symbols;
        }
        let head = (head > 0).then(|| (lo + (head - 1) / l.states, (head - 1) % l.states));
        SubId { tape, head }
    };
    let name = |s: &SubId| {
        (0..width)
            .map(|c| {
                let sym = &m.symbols()[s.tape[c]];
                match s.head {
                    Some((h, r)) if h == lo + c => format!("{sym}^{}", m.states()[r]),
                    _ => sym.clone(),
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    };
    let inputs = l.state_count();
    let mut names = Vec::with_capacity(count);
    let mut trans = Vec::with_capacity(count * inputs);
    let mut output = Vec::with_capacity(count);
    for k in 0..count {
        let s = decode(k);
        names.push(name(&s));
        for v in 0..inputs {
            let next = match l.decode_state(v) {
                Some((cell, mv))
                    if (lo..=hi).contains(&cell) || head_enters(cell, mv, lo, hi, l.n) =>
                {
                    let mut t = s.clone();
                    if (lo..=hi).contains(&cell) {
                        t.tape[cell - lo] = mv.symbol;
                    }
                    t.head = Layout::target(cell, mv.dir, l.n)
                        .filter(|c| (lo..=hi).contains(c))
                        .map(|c| (c, mv.state));
                    encode(&t)
                }
                _ => k,
            };
            trans.push(next);
        }
        output.push(match s.head {
            Some((c, r)) if c == agent => {
                let sym = s.tape[c - lo];
                let mv = m.delta(r, sym).unwrap_or_else(|| {
                    let dir = if c + 1 < l.n { Dir::Right } else { Dir::Left };
                    Move::new(r, sym, dir)
                });
                l.action(mv)
            }
            _ => 0,
        });
    }
    let init = encode(&SubId {
        tape: vec![0; width],
        head: (lo == 0).then_some((0, m.init())),
    });
    ExplicitTransducer::new(names, init, inputs, trans, output)
        .expect("subconfiguration transducers are well formed")
}

fn head_enters(cell: usize, mv: Move, lo: usize, hi: usize, n: usize) -> bool {
    Layout::target(cell, mv.dir, n).is_some_and(|c| (lo..=hi).contains(&c))
}
