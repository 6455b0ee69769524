use std::collections::{HashMap, VecDeque};

use crate::model::{AgentSet, ExplicitSystem};

use super::deviation::SolvedDeviation;

/// A system state paired with the coalition members whose goal is still
/// unvisited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoalTracker {
    pub state: usize,
    pub pending: AgentSet,
}

/// An ultimately periodic decision word `prefix · cycle^ω`, as decision indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoWord {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl LassoWord {
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Letter at position `pos` of the unrolled word.
    pub fn letter(&self, pos: usize) -> usize {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.cycle[(pos - self.prefix.len()) % self.cycle.len()]
        }
    }
}

/// Büchi automaton over decisions accepting the words whose induced trace
/// visits every coalition goal and no other agent's goal.
///
/// Only trackers reachable from the initial one are stored. Tracker states
/// with an empty pending set are accepting and have only accepting
/// successors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAW {
    coalition: AgentSet,
    decision_count: usize,
    trackers: Vec<GoalTracker>,
    init: Option<usize>,
    trans: Vec<Option<usize>>,
}

impl BuchiAW {
    pub fn coalition(&self) -> AgentSet {
        self.coalition
    }

    pub fn state_count(&self) -> usize {
        self.trackers.len()
    }

    pub fn trackers(&self) -> &[GoalTracker] {
        &self.trackers
    }

    pub fn init(&self) -> Option<usize> {
        self.init
    }

    pub fn decision_count(&self) -> usize {
        self.decision_count
    }

    pub fn is_accepting(&self, t: usize) -> bool {
        self.trackers[t].pending.is_empty()
    }

    pub fn accepting_count(&self) -> usize {
        (0..self.state_count())
            .filter(|&t| self.is_accepting(t))
            .count()
    }

    pub fn index_of(&self, tracker: GoalTracker) -> Option<usize> {
        self.trackers.iter().position(|&t| t == tracker)
    }

    /// Successor of tracker `t` on decision `d`; `None` when the automaton is stuck.
    pub fn step(&self, t: usize, d: usize) -> Option<usize> {
        self.trans[t * self.decision_count + d]
    }

    /// Runs a finite word from the initial tracker; `None` if the run gets stuck.
    pub fn run(&self, word: &[usize]) -> Option<Vec<usize>> {
        let mut t = self.init?;
        let mut out = vec![t];
        for &d in word {
            t = self.step(t, d)?;
            out.push(t);
        }
        Some(out)
    }

    /// Whether the automaton accepts the infinite word.
    pub fn accepts(&self, word: &LassoWord) -> bool {
        let in_range = word
            .prefix
            .iter()
            .chain(&word.cycle)
            .all(|&d| d < self.decision_count);
        if word.cycle.is_empty() || !in_range {
            return false;
        }
        let Some(mut t) = self.init else {
            return false;
        };
        let p = word.prefix.len();
        let total = word.len();
        let mut pos = 0usize;
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut history = Vec::new();
        loop {
            if pos >= p {
                if let Some(&first) = seen.get(&(t, pos)) {
                    return history[first..].iter().any(|&s| self.is_accepting(s));
                }
                seen.insert((t, pos), history.len());
            }
            history.push(t);
            match self.step(t, word.letter(pos)) {
                Some(next) => t = next,
                None => return false,
            }
            pos = if pos + 1 < total { pos + 1 } else { p };
        }
    }

    /// Keeps only trackers and transitions reachable from the initial tracker
    /// through allowed transitions, renumbering in breadth-first order.
    fn restrict(
        self,
        keep_state: impl Fn(&GoalTracker) -> bool,
        keep_edge: impl Fn(&GoalTracker, usize) -> bool,
    ) -> BuchiAW {
        let dc = self.decision_count;
        let mut new_index: HashMap<usize, usize> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        let init = self.init.filter(|&i| keep_state(&self.trackers[i]));
        if let Some(i) = init {
            new_index.insert(i, 0);
            order.push(i);
            queue.push_back(i);
        }
        while let Some(t) = queue.pop_front() {
            for d in 0..dc {
                if let Some(u) = self.step(t, d) {
                    if keep_edge(&self.trackers[t], d)
                        && keep_state(&self.trackers[u])
                        && !new_index.contains_key(&u)
                    {
                        new_index.insert(u, order.len());
                        order.push(u);
                        queue.push_back(u);
                    }
                }
            }
        }
        let mut trans = Vec::with_capacity(order.len() * dc);
        for &t in &order {
            for d in 0..dc {
                let target = self
                    .step(t, d)
                    .filter(|_| keep_edge(&self.trackers[t], d))
                    .and_then(|u| new_index.get(&u).copied());
                trans.push(target);
            }
        }
        BuchiAW {
            coalition: self.coalition,
            decision_count: dc,
            trackers: order.iter().map(|&t| self.trackers[t]).collect(),
            init: init.map(|_| 0),
            trans,
        }
    }
}

/// Builds the reachable part of the goal-tracking automaton for coalition `w`.
///
/// A transition is undefined when it enters the goal of an agent outside `w`.
/// If the initial state already lies in such a goal the language is empty.
pub fn build_aw(sys: &ExplicitSystem, w: AgentSet) -> BuchiAW {
    let dc = sys.decision_count();
    let outsiders = AgentSet::full(sys.agent_count()).difference(w);
    let v0 = sys.init();
    let mut aw = BuchiAW {
        coalition: w,
        decision_count: dc,
        trackers: Vec::new(),
        init: None,
        trans: Vec::new(),
    };
    if !sys.goals_at(v0).intersection(outsiders).is_empty() {
        return aw;
    }
    let start = GoalTracker {
        state: v0,
        pending: w.difference(sys.goals_at(v0)),
    };
    let mut index: HashMap<GoalTracker, usize> = HashMap::new();
    index.insert(start, 0);
    aw.trackers.push(start);
    aw.init = Some(0);
    let mut t = 0;
    while t < aw.trackers.len() {
        let GoalTracker { state, pending } = aw.trackers[t];
        for d in 0..dc {
            let next = sys.step(state, d);
            let hit = sys.goals_at(next);
            if !hit.intersection(outsiders).is_empty() {
                aw.trans.push(None);
                continue;
            }
            let tracker = GoalTracker {
                state: next,
                pending: pending.difference(hit),
            };
            let id = *index.entry(tracker).or_insert_with(|| {
                aw.trackers.push(tracker);
                aw.trackers.len() - 1
            });
            aw.trans.push(Some(id));
        }
        t += 1;
    }
    aw
}

/// Removes trackers at dangerous states and transitions on dangerous
/// (state, decision) pairs for every solved deviation game, then restricts
/// to what stays reachable.
pub fn prune(aw: BuchiAW, solved: &[SolvedDeviation]) -> BuchiAW {
    if solved.is_empty() {
        return aw;
    }
    aw.restrict(
        |t| solved.iter().all(|s| !s.dangerous_state(t.state)),
        |t, d| solved.iter().all(|s| !s.dangerous_pair(t.state, d)),
    )
}

/// Finds an accepted lasso word, or `None` when the language is empty.
///
/// The prefix is a shortest path to the nearest accepting tracker that lies
/// on a cycle and the cycle is a shortest loop through it; both are the
/// lexicographically least among equally short choices.
pub fn nonempty(aw: &BuchiAW) -> Option<LassoWord> {
    let init = aw.init?;
    let on_cycle = accepting_on_cycle(aw);
    let dc = aw.decision_count;
    let n = aw.state_count();

    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[init] = true;
    queue.push_back(init);
    let mut target = None;
    'search: while let Some(t) = queue.pop_front() {
        if on_cycle[t] {
            target = Some(t);
            break;
        }
        for d in 0..dc {
            if let Some(u) = aw.step(t, d) {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((t, d));
                    if on_cycle[u] {
                        target = Some(u);
                        break 'search;
                    }
                    queue.push_back(u);
                }
            }
        }
    }
    let c = target?;
    let mut prefix = Vec::new();
    let mut cur = c;
    while let Some((p, d)) = parent[cur] {
        prefix.push(d);
        cur = p;
    }
    prefix.reverse();

    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[c] = true;
    queue.push_back(c);
    let mut closing = None;
    'cycle: while let Some(t) = queue.pop_front() {
        for d in 0..dc {
            if let Some(u) = aw.step(t, d) {
                if u == c {
                    closing = Some((t, d));
                    break 'cycle;
                }
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((t, d));
                    queue.push_back(u);
                }
            }
        }
    }
    let (mut cur, last) = closing.expect("target lies on a cycle");
    let mut cycle = vec![last];
    while let Some((p, d)) = parent[cur] {
        cycle.push(d);
        cur = p;
    }
    cycle.reverse();
    Some(LassoWord { prefix, cycle })
}

/// Accepting trackers that lie on a cycle (strongly connected to themselves).
fn accepting_on_cycle(aw: &BuchiAW) -> Vec<bool> {
    let n = aw.state_count();
    let dc = aw.decision_count;
    let succ = |t: usize| (0..dc).filter_map(move |d| aw.step(t, d));
    let mut result = vec![false; n];
    // iterative Tarjan over the whole automaton
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (t, ref mut next_d)) = call.last_mut() {
            let mut descended = false;
            while *next_d < dc {
                let d = *next_d;
                *next_d += 1;
                if let Some(u) = aw.step(t, d) {
                    if index[u] == usize::MAX {
                        index[u] = counter;
                        low[u] = counter;
                        counter += 1;
                        stack.push(u);
                        on_stack[u] = true;
                        call.push((u, 0));
                        descended = true;
                        break;
                    } else if on_stack[u] {
                        low[t] = low[t].min(index[u]);
                    }
                }
            }
            if descended {
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p] = low[p].min(low[t]);
            }
            if low[t] == index[t] {
                let mut component = Vec::new();
                loop {
                    let u = stack.pop().expect("tarjan stack");
                    on_stack[u] = false;
                    component.push(u);
                    if u == t {
                        break;
                    }
                }
                let cyclic = component.len() > 1 || succ(t).any(|u| u == t);
                if cyclic {
                    for u in component {
                        result[u] = aw.is_accepting(u);
                    }
                }
            }
        }
    }
    result
}
