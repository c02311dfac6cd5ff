use std::collections::VecDeque;

use super::{symbol_count, Letter, StateId, MAX_ARITY, NONE};
use crate::error::{Error, Result};
use crate::numeration::{encode, TrackWord};

/// Deterministic transition skeleton shared by [`Dfa`] and [`Dfao`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Table {
    pub arity: usize,
    pub initial: StateId,
    /// Row-major: `delta[q * 2^arity + sym]`.
    pub delta: Vec<StateId>,
}

impl Table {
    pub fn new(arity: usize, initial: StateId, delta: Vec<StateId>) -> Result<Table> {
        if !(1..=MAX_ARITY).contains(&arity) {
            return Err(Error::Malformed(format!("arity {arity} out of range")));
        }
        let k = symbol_count(arity);
        if delta.is_empty() || !delta.len().is_multiple_of(k) {
            return Err(Error::Malformed(format!(
                "transition table of length {} is not a positive multiple of {k}",
                delta.len()
            )));
        }
        let n = delta.len() / k;
        if initial as usize >= n {
            return Err(Error::Malformed(format!(
                "initial state {initial} out of range"
            )));
        }
        if let Some(&bad) = delta.iter().find(|&&t| t != NONE && t as usize >= n) {
            return Err(Error::Malformed(format!(
                "transition to missing state {bad}"
            )));
        }
        Ok(Table {
            arity,
            initial,
            delta,
        })
    }

    #[inline]
    pub fn k(&self) -> usize {
        symbol_count(self.arity)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.delta.len() / self.k()
    }

    #[inline]
    pub fn next(&self, q: StateId, sym: usize) -> Option<StateId> {
        let t = self.delta[q as usize * self.k() + sym];
        (t != NONE).then_some(t)
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().filter(|&&t| t != NONE).count()
    }

    pub fn run(&self, symbols: &[usize]) -> std::result::Result<StateId, usize> {
        let mut q = self.initial;
        for (pos, &s) in symbols.iter().enumerate() {
            q = self.next(q, s).ok_or(pos)?;
        }
        Ok(q)
    }

    /// BFS order from the initial state, symbols ascending. Returns
    /// `order` (new → old) and `rank` (old → new, `NONE` if unreachable).
    pub fn bfs_order(&self) -> (Vec<StateId>, Vec<StateId>) {
        let k = self.k();
        let mut rank = vec![NONE; self.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        rank[self.initial as usize] = 0;
        order.push(self.initial);
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            for s in 0..k {
                let t = self.delta[q as usize * k + s];
                if t != NONE && rank[t as usize] == NONE {
                    rank[t as usize] = order.len() as StateId;
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        (order, rank)
    }

    /// Keeps the states in `order` (new → old), redirecting transitions to
    /// dropped states to `NONE`. The initial state must be kept.
    pub fn restrict(&self, order: &[StateId]) -> (Table, Vec<StateId>) {
        let k = self.k();
        let mut rank = vec![NONE; self.len()];
        for (i, &q) in order.iter().enumerate() {
            rank[q as usize] = i as StateId;
        }
        let mut delta = Vec::with_capacity(order.len() * k);
        for &q in order {
            for s in 0..k {
                let t = self.delta[q as usize * k + s];
                delta.push(if t == NONE { NONE } else { rank[t as usize] });
            }
        }
        let initial = rank[self.initial as usize];
        assert_ne!(initial, NONE, "restriction dropped the initial state");
        (
            Table {
                arity: self.arity,
                initial,
                delta,
            },
            rank,
        )
    }

    /// States from which some state in `targets` is reachable.
    pub fn coaccessible(&self, targets: &[bool]) -> Vec<bool> {
        let k = self.k();
        let n = self.len();
        // reverse adjacency in CSR form
        let mut count = vec![0u32; n + 1];
        for &t in &self.delta {
            if t != NONE {
                count[t as usize + 1] += 1;
            }
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut preds = vec![0 as StateId; count[n] as usize];
        for q in 0..n {
            for s in 0..k {
                let t = self.delta[q * k + s];
                if t != NONE {
                    preds[fill[t as usize] as usize] = q as StateId;
                    fill[t as usize] += 1;
                }
            }
        }
        let mut seen = targets.to_vec();
        let mut stack: Vec<usize> = (0..n).filter(|&q| targets[q]).collect();
        while let Some(t) = stack.pop() {
            for &p in &preds[count[t] as usize..count[t + 1] as usize] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    stack.push(p as usize);
                }
            }
        }
        seen
    }
}

/// Deterministic automaton with partial transitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    pub(crate) table: Table,
    pub(crate) accepting: Vec<bool>,
}

impl Dfa {
    /// `delta` is row-major with `2^arity` entries per state; [`NONE`] marks
    /// a missing transition.
    pub fn new(
        arity: usize,
        initial: StateId,
        delta: Vec<StateId>,
        accepting: Vec<bool>,
    ) -> Result<Dfa> {
        let table = Table::new(arity, initial, delta)?;
        if accepting.len() != table.len() {
            return Err(Error::Malformed(format!(
                "{} accepting flags for {} states",
                accepting.len(),
                table.len()
            )));
        }
        Ok(Dfa { table, accepting })
    }

    /// Single state with every transition a self-loop.
    pub fn universal(arity: usize) -> Dfa {
        Dfa::new(arity, 0, vec![0; symbol_count(arity)], vec![true]).expect("well formed")
    }

    /// Accepts exactly the inputs whose every track is a valid word. States
    /// are the last column read.
    pub fn valid(arity: usize) -> Dfa {
        let k = symbol_count(arity);
        let delta = (0..k)
            .flat_map(|last| (0..k).map(move |s| if last & s == 0 { s as StateId } else { NONE }))
            .collect();
        Dfa::new(arity, 0, delta, vec![true; k]).expect("well formed")
    }

    pub fn arity(&self) -> usize {
        self.table.arity
    }

    pub fn initial(&self) -> StateId {
        self.table.initial
    }

    /// Materialized states; the dead state is never among them.
    pub fn num_states(&self) -> usize {
        self.table.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.table.transition_count()
    }

    pub fn next(&self, q: StateId, sym: usize) -> Option<StateId> {
        self.table.next(q, sym)
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn delta(&self) -> &[StateId] {
        &self.table.delta
    }

    pub fn accepts_symbols(&self, symbols: &[usize]) -> bool {
        matches!(self.table.run(symbols), Ok(q) if self.accepting[q as usize])
    }

    pub fn accepts(&self, w: &TrackWord) -> Result<bool> {
        if w.arity() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                found: w.arity(),
            });
        }
        Ok(self.accepts_symbols(&w.symbols()))
    }

    /// Drops states that are unreachable or cannot reach acceptance. The
    /// initial state is always kept.
    pub fn trim(&self) -> Dfa {
        let (order, _) = self.table.bfs_order();
        let co = self.table.coaccessible(&self.accepting);
        let keep: Vec<StateId> = order
            .into_iter()
            .filter(|&q| q == self.table.initial || co[q as usize])
            .collect();
        let (table, _) = self.table.restrict(&keep);
        let accepting = keep.iter().map(|&q| self.accepting[q as usize]).collect();
        Dfa { table, accepting }
    }

    /// Renumbers states in BFS order (symbols ascending) and drops
    /// unreachable ones.
    pub fn canonical(&self) -> Dfa {
        let (order, _) = self.table.bfs_order();
        let (table, _) = self.table.restrict(&order);
        let accepting = order.iter().map(|&q| self.accepting[q as usize]).collect();
        Dfa { table, accepting }
    }

    /// Minimal equivalent DFA, canonically numbered, dead state pruned.
    pub fn minimize(&self) -> Dfa {
        super::minimize::minimize_dfa(self)
    }

    /// Same transitions with some tracks reordered: track `i` of the result
    /// reads what track `perm[i]` of `self` read.
    pub fn permute_tracks(&self, perm: &[usize]) -> Result<Dfa> {
        let k = self.arity();
        let mut seen = vec![false; k];
        if perm.len() != k
            || perm
                .iter()
                .any(|&p| p >= k || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::TrackMap(format!(
                "{perm:?} is not a permutation of 0..{k}"
            )));
        }
        let syms = symbol_count(k);
        let map: Vec<usize> = (0..syms)
            .map(|s| {
                perm.iter()
                    .enumerate()
                    .map(|(i, &p)| (super::digit(s, i, k) as usize) << (k - 1 - p))
                    .sum::<usize>()
            })
            .collect();
        let n = self.num_states();
        let mut delta = vec![NONE; n * syms];
        for q in 0..n {
            for s in 0..syms {
                delta[q * syms + s] = self.table.delta[q * syms + map[s]];
            }
        }
        Dfa::new(k, self.initial(), delta, self.accepting.clone())
    }

    /// Same skeleton read as a UFAO-less NFA.
    pub fn to_nfa(&self) -> Nfa {
        let delta = self
            .table
            .delta
            .iter()
            .map(|&t| if t == NONE { Vec::new() } else { vec![t] })
            .collect();
        Nfa {
            arity: self.arity(),
            initial: vec![self.initial()],
            delta,
            accepting: self.accepting.clone(),
        }
    }

    /// Redirects one transition; used for fault injection.
    pub fn with_transition(&self, q: StateId, sym: usize, target: StateId) -> Result<Dfa> {
        let mut delta = self.table.delta.clone();
        let idx = q as usize * self.table.k() + sym;
        if idx >= delta.len() {
            return Err(Error::Parameter(format!(
                "no slot for state {q} symbol {sym}"
            )));
        }
        delta[idx] = target;
        Dfa::new(self.arity(), self.initial(), delta, self.accepting.clone())
    }
}

/// Deterministic automaton with an output letter on every state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfao {
    pub(crate) table: Table,
    pub(crate) output: Vec<Letter>,
}

impl Dfao {
    pub fn new(
        arity: usize,
        initial: StateId,
        delta: Vec<StateId>,
        output: Vec<Letter>,
    ) -> Result<Dfao> {
        let table = Table::new(arity, initial, delta)?;
        if output.len() != table.len() {
            return Err(Error::Malformed(format!(
                "{} outputs for {} states",
                output.len(),
                table.len()
            )));
        }
        Ok(Dfao { table, output })
    }

    pub fn arity(&self) -> usize {
        self.table.arity
    }

    pub fn initial(&self) -> StateId {
        self.table.initial
    }

    pub fn num_states(&self) -> usize {
        self.table.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.table.transition_count()
    }

    pub fn next(&self, q: StateId, sym: usize) -> Option<StateId> {
        self.table.next(q, sym)
    }

    pub fn output(&self, q: StateId) -> Letter {
        self.output[q as usize]
    }

    pub fn outputs(&self) -> &[Letter] {
        &self.output
    }

    pub fn delta(&self) -> &[StateId] {
        &self.table.delta
    }

    /// State reached on `symbols`, or the position of the missing transition.
    pub fn state_after(&self, symbols: &[usize]) -> Result<StateId> {
        self.table
            .run(symbols)
            .map_err(|position| Error::InvalidInput { position })
    }

    pub fn run_symbols(&self, symbols: &[usize]) -> Result<Letter> {
        self.state_after(symbols).map(|q| self.output[q as usize])
    }

    pub fn run(&self, w: &TrackWord) -> Result<Letter> {
        if w.arity() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                found: w.arity(),
            });
        }
        self.run_symbols(&w.symbols())
    }

    /// Output on the canonical representation of `i` (arity 1 only).
    pub fn eval(&self, i: u64) -> Result<Letter> {
        if self.arity() != 1 {
            return Err(Error::Arity {
                expected: 1,
                found: self.arity(),
            });
        }
        let syms: Vec<usize> = encode(i).digits().iter().map(|&d| d as usize).collect();
        self.run_symbols(&syms)
    }

    /// Drops unreachable states and renumbers in BFS order.
    pub fn canonical(&self) -> Dfao {
        let (order, _) = self.table.bfs_order();
        let (table, _) = self.table.restrict(&order);
        let output = order.iter().map(|&q| self.output[q as usize]).collect();
        Dfao { table, output }
    }

    pub fn minimize(&self) -> Dfao {
        super::minimize::minimize_dfao(self)
    }

    /// The skeleton with every state accepting.
    pub fn as_dfa(&self) -> Dfa {
        Dfa {
            table: self.table.clone(),
            accepting: vec![true; self.num_states()],
        }
    }

    /// Same skeleton with outputs replaced by state ids.
    pub fn interior(&self) -> Dfao {
        Dfao {
            table: self.table.clone(),
            output: (0..self.num_states() as Letter).collect(),
        }
    }

    /// Same skeleton with every output passed through `coding`.
    pub fn map_outputs(&self, coding: impl Fn(Letter) -> Letter) -> Dfao {
        Dfao {
            table: self.table.clone(),
            output: self.output.iter().map(|&o| coding(o)).collect(),
        }
    }
}

/// Nondeterministic automaton with a set of initial states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    pub(crate) arity: usize,
    pub(crate) initial: Vec<StateId>,
    /// Row-major successor lists, sorted and deduplicated.
    pub(crate) delta: Vec<Vec<StateId>>,
    pub(crate) accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(
        arity: usize,
        initial: Vec<StateId>,
        delta: Vec<Vec<StateId>>,
        accepting: Vec<bool>,
    ) -> Result<Nfa> {
        if !(1..=MAX_ARITY).contains(&arity) {
            return Err(Error::Malformed(format!("arity {arity} out of range")));
        }
        let k = symbol_count(arity);
        if !delta.len().is_multiple_of(k) || delta.len() / k != accepting.len() {
            return Err(Error::Malformed(
                "transition table does not match state count".into(),
            ));
        }
        let n = accepting.len();
        if initial
            .iter()
            .chain(delta.iter().flatten())
            .any(|&t| t as usize >= n)
        {
            return Err(Error::Malformed("transition to missing state".into()));
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        let delta = delta
            .into_iter()
            .map(|mut v| {
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        Ok(Nfa {
            arity,
            initial,
            delta,
            accepting,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, q: StateId, sym: usize) -> &[StateId] {
        &self.delta[q as usize * symbol_count(self.arity) + sym]
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q as usize]
    }

    /// Subset simulation.
    pub fn accepts_symbols(&self, symbols: &[usize]) -> bool {
        let n = self.num_states();
        let mut cur = vec![false; n];
        for &q in &self.initial {
            cur[q as usize] = true;
        }
        for &s in symbols {
            let mut nxt = vec![false; n];
            for q in (0..n).filter(|&q| cur[q]) {
                for &t in self.successors(q as StateId, s) {
                    nxt[t as usize] = true;
                }
            }
            cur = nxt;
        }
        (0..n).any(|q| cur[q] && self.accepting[q])
    }

    /// True when every state has at most one successor per symbol and there
    /// is a single initial state.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1 && self.delta.iter().all(|v| v.len() <= 1)
    }
}

/// Nondeterministic automaton whose accepting states carry outputs; for a
/// well-formed UFAO all accepting runs on one input agree on the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ufao {
    pub(crate) nfa: Nfa,
    pub(crate) output: Vec<Option<Letter>>,
}

impl Ufao {
    /// `output[q]` must be `Some` exactly on accepting states.
    pub fn new(nfa: Nfa, output: Vec<Option<Letter>>) -> Result<Ufao> {
        if output.len() != nfa.num_states() {
            return Err(Error::Malformed(
                "output table does not match state count".into(),
            ));
        }
        if (0..nfa.num_states()).any(|q| nfa.accepting[q] != output[q].is_some()) {
            return Err(Error::Malformed(
                "outputs must sit exactly on accepting states".into(),
            ));
        }
        Ok(Ufao { nfa, output })
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    pub fn output(&self, q: StateId) -> Option<Letter> {
        self.output[q as usize]
    }

    pub fn num_states(&self) -> usize {
        self.nfa.num_states()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib_word() -> Dfao {
        Dfao::new(1, 0, vec![0, 1, 0, NONE], vec![0, 1]).unwrap()
    }

    #[test]
    fn dfao_run_empty_and_prefix() {
        let f = fib_word();
        let prefix: Vec<Letter> = (0..8).map(|i| f.eval(i).unwrap()).collect();
        assert_eq!(prefix, vec![0, 1, 0, 0, 1, 0, 1, 0]);
        assert_eq!(f.run_symbols(&[]).unwrap(), 0);
        assert_eq!(
            f.run_symbols(&[1, 1]),
            Err(Error::InvalidInput { position: 1 })
        );
    }

    #[test]
    fn malformed_tables_rejected() {
        assert!(Dfa::new(1, 0, vec![0, 5], vec![true]).is_err());
        assert!(Dfa::new(1, 2, vec![0, 0], vec![true]).is_err());
        assert!(Dfa::new(2, 0, vec![0, 0, 0], vec![true]).is_err());
        assert!(Dfao::new(1, 0, vec![0, 0], vec![]).is_err());
    }

    #[test]
    fn empty_word_uses_initial_verdict() {
        let d = Dfa::new(1, 0, vec![1, NONE, 1, 1], vec![false, true]).unwrap();
        assert!(!d.accepts_symbols(&[]));
        assert!(d.accepts_symbols(&[0]));
    }

    #[test]
    fn permute_tracks_swaps() {
        // accepts exactly the column [1,0]
        let d = Dfa::new(
            2,
            0,
            vec![NONE, NONE, 1, NONE, NONE, NONE, NONE, NONE],
            vec![false, true],
        )
        .unwrap();
        let s = d.permute_tracks(&[1, 0]).unwrap();
        assert!(s.accepts_symbols(&[0b01]));
        assert!(!s.accepts_symbols(&[0b10]));
        assert!(d.permute_tracks(&[0, 0]).is_err());
    }

    #[test]
    fn trim_removes_dead_branch() {
        // 0 -0-> 0, 0 -1-> 1 (1 is a dead end, non-accepting)
        let d = Dfa::new(1, 0, vec![0, 1, NONE, NONE], vec![true, false]).unwrap();
        let t = d.trim();
        assert_eq!(t.num_states(), 1);
        assert_eq!(t.num_transitions(), 1);
    }
}
