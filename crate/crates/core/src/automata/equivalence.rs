use std::collections::{HashMap, VecDeque};

use super::machines::{Dfa, Dfao};
use super::{symbol_count, Letter, StateId};
use crate::error::{Error, Result};

type Pair = (Option<StateId>, Option<StateId>);

fn check_arity(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Arity {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// Structural equality after canonical renumbering.
pub fn isomorphic(a: &Dfa, b: &Dfa) -> bool {
    a.canonical() == b.canonical()
}

pub fn isomorphic_dfao(a: &Dfao, b: &Dfao) -> bool {
    a.canonical() == b.canonical()
}

/// Language equality, decided by comparing canonical minimal automata.
pub fn equivalent(a: &Dfa, b: &Dfa) -> Result<bool> {
    check_arity(a.arity(), b.arity())?;
    Ok(a.minimize() == b.minimize())
}

/// Function equality (including the domain of defined outputs).
pub fn equivalent_dfao(a: &Dfao, b: &Dfao) -> Result<bool> {
    check_arity(a.arity(), b.arity())?;
    Ok(a.minimize() == b.minimize())
}

/// Breadth-first search over pairs of (possibly dead) states for a shortest
/// word on which `verdict` differs.
fn search<V: PartialEq>(
    k: usize,
    start: (Option<StateId>, Option<StateId>),
    next_a: impl Fn(StateId, usize) -> Option<StateId>,
    next_b: impl Fn(StateId, usize) -> Option<StateId>,
    verdict: impl Fn(Option<StateId>, Option<StateId>) -> (V, V),
) -> Option<Vec<usize>> {
    let mut parent: HashMap<Pair, Option<(Pair, usize)>> = HashMap::new();
    let mut queue = VecDeque::new();
    parent.insert(start, None);
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        let (va, vb) = verdict(cur.0, cur.1);
        if va != vb {
            let mut word = Vec::new();
            let mut at = cur;
            while let Some(&Some((prev, s))) = parent.get(&at) {
                word.push(s);
                at = prev;
            }
            word.reverse();
            return Some(word);
        }
        if cur == (None, None) {
            continue;
        }
        for s in 0..k {
            let nxt = (
                cur.0.and_then(|p| next_a(p, s)),
                cur.1.and_then(|q| next_b(q, s)),
            );
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(nxt) {
                e.insert(Some((cur, s)));
                queue.push_back(nxt);
            }
        }
    }
    None
}

/// A shortest word (as packed symbols) accepted by exactly one of `a`, `b`.
pub fn counterexample(a: &Dfa, b: &Dfa) -> Result<Option<Vec<usize>>> {
    check_arity(a.arity(), b.arity())?;
    // dead-but-materialized states are harmless: they only delay detection
    Ok(search(
        symbol_count(a.arity()),
        (Some(a.initial()), Some(b.initial())),
        |p, s| a.next(p, s),
        |q, s| b.next(q, s),
        |p, q| {
            (
                p.is_some_and(|p| a.is_accepting(p)),
                q.is_some_and(|q| b.is_accepting(q)),
            )
        },
    ))
}

/// A shortest word on which the outputs of `a` and `b` differ, treating a
/// missing transition as "no output".
pub fn counterexample_dfao(a: &Dfao, b: &Dfao) -> Result<Option<Vec<usize>>> {
    check_arity(a.arity(), b.arity())?;
    Ok(search::<Option<Letter>>(
        symbol_count(a.arity()),
        (Some(a.initial()), Some(b.initial())),
        |p, s| a.next(p, s),
        |q, s| b.next(q, s),
        |p, q| (p.map(|p| a.output(p)), q.map(|q| b.output(q))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::NONE;

    #[test]
    fn self_equivalent() {
        let d = Dfa::new(1, 0, vec![0, 1, 0, NONE], vec![true, false]).unwrap();
        assert!(equivalent(&d, &d).unwrap());
        assert_eq!(counterexample(&d, &d).unwrap(), None);
    }

    #[test]
    fn shortest_counterexample() {
        let all = Dfa::universal(1);
        let zeros = Dfa::new(1, 0, vec![0, NONE], vec![true]).unwrap();
        assert!(!equivalent(&all, &zeros).unwrap());
        assert_eq!(counterexample(&all, &zeros).unwrap(), Some(vec![1]));
    }

    #[test]
    fn arity_mismatch() {
        assert!(equivalent(&Dfa::universal(1), &Dfa::universal(2)).is_err());
    }
}
