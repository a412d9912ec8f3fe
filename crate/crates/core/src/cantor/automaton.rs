//! Finite-state description of the digit words of `E(α,s)` and `F(α,s)`.
//!
//! Every constraint on the digits looks back a bounded distance, so a word is
//! admissible exactly when a small cursor can be pushed through it. The
//! dissection nodes add one more constraint on the tail: it must stay at or
//! below the word `a−2, a−2, …` (an `A` node) or climb strictly above it
//! (a `B` node).
//!
//! With `α` eventually periodic, a state is the pair (phase of the next digit,
//! cursor). There are finitely many, so the states with an infinite
//! continuation can be found by pruning dead ends, and the lexicographically
//! extreme continuations are eventually periodic.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::ncf::NcfExpansion;
use crate::numerics::Surd;
use crate::word::PeriodicWord;

use super::SetKind;

/// Constraint on the tail after the node prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Mode {
    Free,
    /// Lexicographically at most `a−2, a−2, …`.
    AtMostTwos,
    /// Strictly above `a−2, a−2, …`: a run of `a−2` closed by `a−1`.
    AboveTwos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Cursor {
    /// Trailing zeros.
    zeros: u16,
    /// Set after an `a−1` that has only been followed by `a−2`s; counts them.
    open: Option<u16>,
    /// Trailing digits equal to `a−2`, capped at `s` (E only).
    twos: u16,
    pub mode: Mode,
}

impl Cursor {
    pub const START: Cursor = Cursor {
        zeros: 0,
        open: None,
        twos: 0,
        mode: Mode::Free,
    };

    pub fn with_mode(self, mode: Mode) -> Cursor {
        Cursor { mode, ..self }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Rules {
    pub set: SetKind,
    pub s: u16,
}

impl Rules {
    /// Cursor after appending digit `d` at a position with partial quotient
    /// `a`, or `None` if the word leaves the set.
    pub fn step(&self, a: u32, d: u32, c: Cursor) -> Option<Cursor> {
        let e = self.set == SetKind::E;
        if d >= a || (e && c.mode == Mode::AboveTwos && c.twos >= self.s) {
            return None;
        }
        let top = d + 1 == a;
        let two = d + 2 == a;
        let zeros = if d == 0 { c.zeros + 1 } else { 0 };
        if zeros > self.s {
            return None;
        }
        // a−1, a−2, …, a−2, a−1 never occurs in a Davenport expansion.
        if top && c.open.is_some() {
            return None;
        }
        if e && top && c.twos >= self.s {
            return None;
        }
        let open = if top {
            Some(0)
        } else if two {
            c.open.map(|k| if e { 0 } else { k + 1 })
        } else {
            None
        };
        if !e && open == Some(self.s) {
            return None;
        }
        let twos = if e && two { (c.twos + 1).min(self.s) } else { 0 };
        let mode = match c.mode {
            Mode::Free => Mode::Free,
            Mode::AtMostTwos if d + 2 > a => return None,
            Mode::AboveTwos if d + 2 < a => return None,
            m if two => m,
            _ => Mode::Free,
        };
        if e && mode == Mode::AboveTwos && twos >= self.s {
            return None;
        }
        Some(Cursor {
            zeros,
            open,
            twos,
            mode,
        })
    }
}

/// Which extreme continuation to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Side {
    Lower,
    Upper,
}

type State = (usize, Cursor);

pub(crate) struct Automaton {
    pub rules: Rules,
    alpha: NcfExpansion,
    /// `a_j` for canonical phases `j = 1..=T+P`, stored at `j−1`.
    digits: Vec<u32>,
    /// Canonical phase of `j+1`, stored at `j−1`.
    next: Vec<usize>,
    /// `α_j` per phase.
    quotients: Vec<Surd>,
    live: HashSet<State>,
    tails: Mutex<HashMap<(State, Side), Surd>>,
}

impl Automaton {
    pub fn new(set: SetKind, alpha: &NcfExpansion, s: usize) -> Result<Self> {
        let word = alpha.require_periodic()?;
        let s = u16::try_from(s).map_err(|_| Error::OutOfRange("s above 65535".into()))?;
        let phases = word.preperiod.len() + word.period.len();
        let mut digits = Vec::with_capacity(phases);
        let mut next = Vec::with_capacity(phases);
        let mut quotients = Vec::with_capacity(phases);
        for j in 1..=phases {
            digits.push(alpha.digit(j)?);
            next.push(alpha.phase(j + 1));
            quotients.push(alpha.alpha_i(j)?);
        }
        let mut auto = Automaton {
            rules: Rules { set, s },
            alpha: alpha.clone(),
            digits,
            next,
            quotients,
            live: HashSet::new(),
            tails: Mutex::new(HashMap::new()),
        };
        auto.live = auto.live_states();
        Ok(auto)
    }

    fn successors(&self, (j, c): State) -> impl Iterator<Item = (u32, State)> + '_ {
        let a = self.digits[j - 1];
        let nj = self.next[j - 1];
        (0..a).filter_map(move |d| self.rules.step(a, d, c).map(|n| (d, (nj, n))))
    }

    /// States reachable from the start, in every mode a node can impose.
    fn reachable(&self) -> Vec<State> {
        let mut seen: HashSet<State> = HashSet::new();
        let mut queue: VecDeque<State> = VecDeque::new();
        let push = |st: State, seen: &mut HashSet<State>, queue: &mut VecDeque<State>| {
            if seen.insert(st) {
                queue.push_back(st);
            }
        };
        push((1, Cursor::START), &mut seen, &mut queue);
        while let Some(st) = queue.pop_front() {
            if self.rules.set == SetKind::E && st.1.mode == Mode::Free {
                for m in [Mode::AtMostTwos, Mode::AboveTwos] {
                    push((st.0, st.1.with_mode(m)), &mut seen, &mut queue);
                }
            }
            for (_, nx) in self.successors(st) {
                push(nx, &mut seen, &mut queue);
            }
        }
        let mut out: Vec<State> = seen.into_iter().collect();
        out.sort_by_key(|&(j, c)| (j, c.zeros, c.open, c.twos, c.mode));
        out
    }

    /// States with at least one infinite continuation.
    fn live_states(&self) -> HashSet<State> {
        let mut live: HashSet<State> = self.reachable().into_iter().collect();
        loop {
            let dead: Vec<State> = live
                .iter()
                .copied()
                .filter(|&st| !self.successors(st).any(|(_, nx)| live.contains(&nx)))
                .collect();
            if dead.is_empty() {
                return live;
            }
            for st in dead {
                live.remove(&st);
            }
        }
    }

    pub fn phase(&self, n: usize) -> usize {
        self.alpha.phase(n + 1)
    }

    pub fn digit_at_phase(&self, j: usize) -> u32 {
        self.digits[j - 1]
    }

    /// Cursor after the whole prefix, or `None` if it already leaves the set.
    pub fn run(&self, prefix: &[u32]) -> Option<Cursor> {
        let mut c = Cursor::START;
        let mut j = 1;
        for &d in prefix {
            c = self.rules.step(self.digits[j - 1], d, c)?;
            j = self.next[j - 1];
        }
        Some(c)
    }

    pub fn is_live(&self, n: usize, c: Cursor) -> bool {
        self.live.contains(&(self.phase(n), c))
    }

    fn greedy(&self, st: State, side: Side) -> (u32, State) {
        let mut options = self.successors(st).filter(|(_, nx)| self.live.contains(nx));
        let pick = match side {
            Side::Lower => options.next(),
            Side::Upper => options.last(),
        };
        pick.expect("live states have a live successor")
    }

    /// The extreme continuation from a live state, as a preperiod and period.
    fn continuation(&self, st: State, side: Side) -> (Vec<(State, u32)>, usize) {
        let mut path: Vec<(State, u32)> = Vec::new();
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut cur = st;
        loop {
            if let Some(&i) = index.get(&cur) {
                return (path, i);
            }
            index.insert(cur, path.len());
            let (d, nx) = self.greedy(cur, side);
            path.push((cur, d));
            cur = nx;
        }
    }

    /// Extreme digit continuation after `n` digits with cursor `c`.
    pub fn extreme_word(&self, prefix: &[u32], c: Cursor, side: Side) -> PeriodicWord {
        let (path, start) = self.continuation((self.phase(prefix.len()), c), side);
        let mut pre = prefix.to_vec();
        pre.extend(path[..start].iter().map(|&(_, d)| d));
        let period = path[start..].iter().map(|&(_, d)| d).collect();
        PeriodicWord::new(pre, period)
            .expect("cycles are nonempty")
            .normalized()
    }

    /// `Σ_{m≥1} b_{n+m} α_{n+1}⋯α_{n+m}` along the extreme continuation, so
    /// that the endpoint is `S + D_n·tail`.
    pub fn tail(&self, n: usize, c: Cursor, side: Side) -> Result<Surd> {
        let st = (self.phase(n), c);
        if let Some(v) = self.tails.lock().expect("cache lock").get(&(st, side)) {
            return Ok(v.clone());
        }
        let (path, start) = self.continuation(st, side);
        let cycle_state = path[start].0;
        let cycle: Vec<u32> = path[start..].iter().map(|&(_, d)| d).collect();
        let mut value = self
            .alpha
            .shifted(cycle_state.0 - 1)?
            .weighted_sum(&PeriodicWord::purely_periodic(cycle)?)?;
        let mut found = vec![(cycle_state, value.clone())];
        for &((j, cur), d) in path[..start].iter().rev() {
            value = &self.quotients[j - 1] * &(&value + &Surd::from_int(d));
            found.push(((j, cur), value.clone()));
        }
        let mut cache = self.tails.lock().expect("cache lock");
        for (k, v) in found {
            cache.insert((k, side), v);
        }
        Ok(cache[&(st, side)].clone())
    }
}

/// Whether the first `scan` digits of `w` avoid every forbidden block.
pub(crate) fn scan_word(rules: Rules, alpha: &NcfExpansion, w: &PeriodicWord, scan: usize) -> Result<bool> {
    let mut c = Cursor::START;
    for i in 0..scan {
        match rules.step(alpha.digit(i + 1)?, w.get(i), c) {
            Some(n) => c = n,
            None => return Ok(false),
        }
    }
    Ok(true)
}
