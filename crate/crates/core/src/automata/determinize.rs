use std::collections::{HashMap, VecDeque};

use super::machines::{Dfa, Dfao, Nfa, Ufao};
use super::{symbol_count, Letter, StateId, NONE};
use crate::error::{Error, Result};

/// A determinized machine together with the NFA subset behind each state.
#[derive(Clone, Debug)]
pub struct Determinized<T> {
    pub automaton: T,
    /// Sorted NFA state ids per deterministic state.
    pub subsets: Vec<Vec<StateId>>,
}

/// Reachable-subset exploration. `keep` decides whether a non-empty subset
/// is materialized; rejected subsets become missing transitions.
fn explore(
    nfa: &Nfa,
    mut keep: impl FnMut(&[StateId]) -> Result<bool>,
) -> Result<(Vec<StateId>, Vec<Vec<StateId>>)> {
    let k = symbol_count(nfa.arity);
    let n = nfa.num_states();
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    let mut delta = Vec::new();
    let mut queue = VecDeque::new();

    let init = nfa.initial.clone();
    if init.is_empty() || !keep(&init)? {
        return Err(Error::Malformed(
            "initial subset is empty or has no output".into(),
        ));
    }
    index.insert(init.clone(), 0);
    subsets.push(init);
    queue.push_back(0usize);

    let mut mark = vec![false; n];
    let mut scratch = Vec::new();
    while let Some(i) = queue.pop_front() {
        for s in 0..k {
            scratch.clear();
            for &q in &subsets[i] {
                for &t in nfa.successors(q, s) {
                    if !mark[t as usize] {
                        mark[t as usize] = true;
                        scratch.push(t);
                    }
                }
            }
            for &t in &scratch {
                mark[t as usize] = false;
            }
            if scratch.is_empty() {
                delta.push(NONE);
                continue;
            }
            scratch.sort_unstable();
            if let Some(&id) = index.get(&scratch) {
                delta.push(id);
                continue;
            }
            if !keep(&scratch)? {
                delta.push(NONE);
                continue;
            }
            let id = subsets.len() as StateId;
            index.insert(scratch.clone(), id);
            subsets.push(scratch.clone());
            queue.push_back(id as usize);
            delta.push(id);
        }
    }
    Ok((delta, subsets))
}

/// Subset construction. The empty subset is the dead state and is not
/// materialized; subsets are numbered in BFS order, symbols ascending.
pub fn determinize(nfa: &Nfa) -> Determinized<Dfa> {
    let (delta, subsets) = explore(nfa, |_| Ok(true)).expect("initial subset is never empty");
    let accepting = subsets
        .iter()
        .map(|set| set.iter().any(|&q| nfa.accepting[q as usize]))
        .collect();
    Determinized {
        automaton: Dfa::new(nfa.arity, 0, delta, accepting).expect("well formed"),
        subsets,
    }
}

fn subset_output(u: &Ufao, set: &[StateId]) -> Result<Option<Letter>> {
    let mut found: Option<Letter> = None;
    for &q in set {
        if let Some(o) = u.output[q as usize] {
            match found {
                None => found = Some(o),
                Some(f) if f != o => {
                    return Err(Error::Ambiguous {
                        subset: set.to_vec(),
                        first: f,
                        second: o,
                    })
                }
                _ => {}
            }
        }
    }
    Ok(found)
}

/// Subset construction for a UFAO. A subset's output is the common output
/// of its accepting members; disagreement is reported as
/// [`Error::Ambiguous`]. Subsets without accepting members carry no output
/// and are treated as dead.
pub fn determinize_ufao(u: &Ufao) -> Result<Determinized<Dfao>> {
    let (delta, subsets) = explore(&u.nfa, |set| Ok(subset_output(u, set)?.is_some()))?;
    let output = subsets
        .iter()
        .map(|set| subset_output(u, set).map(|o| o.expect("kept subsets have outputs")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Determinized {
        automaton: Dfao::new(u.nfa.arity, 0, delta, output)?,
        subsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dfa_as_nfa_round_trips() {
        let d = Dfa::new(1, 0, vec![0, 1, 0, NONE], vec![true, false]).unwrap();
        let back = determinize(&d.to_nfa()).automaton;
        assert_eq!(back.canonical(), d.canonical());
    }

    #[test]
    fn ambiguity_reported() {
        // two initial states, both accepting, different outputs
        let nfa = Nfa::new(
            1,
            vec![0, 1],
            vec![vec![], vec![], vec![], vec![]],
            vec![true, true],
        )
        .unwrap();
        let u = Ufao::new(nfa, vec![Some(0), Some(1)]).unwrap();
        match determinize_ufao(&u) {
            Err(Error::Ambiguous { first, second, .. }) => assert_ne!(first, second),
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn subsets_without_output_are_dead() {
        // 0 --1--> 1 (non-accepting) --0--> 2 (accepting)
        let nfa = Nfa::new(
            1,
            vec![0],
            vec![vec![0], vec![1], vec![2], vec![], vec![], vec![]],
            vec![true, false, true],
        )
        .unwrap();
        let u = Ufao::new(nfa, vec![Some(7), None, Some(9)]).unwrap();
        let d = determinize_ufao(&u).unwrap().automaton;
        assert_eq!(d.num_states(), 1);
        assert_eq!(d.run_symbols(&[0, 0]).unwrap(), 7);
        assert!(d.run_symbols(&[1]).is_err());
    }
}
