//! Hopcroft partition refinement.
//!
//! The automaton is completed with a temporary sink before refinement; the
//! sink's class (the dead class) is dropped again when the quotient is
//! built.

use std::collections::HashMap;

use super::machines::{Dfa, Dfao, Table};
use super::{StateId, NONE};

/// Result of refining a completed automaton of `n + 1` states, state `n`
/// being the sink.
struct Classes {
    block: Vec<u32>,
    sink_block: u32,
    count: usize,
}

/// `labels` has `n + 1` entries, the last one for the sink.
fn refine(n: usize, k: usize, delta: &[StateId], labels: &[u64]) -> Classes {
    let total = n + 1;
    let sink = n as u32;
    let target = |q: usize, a: usize| -> u32 {
        if q == n {
            sink
        } else {
            let t = delta[q * k + a];
            if t == NONE {
                sink
            } else {
                t
            }
        }
    };

    // predecessor lists per (symbol, target) in CSR form
    let mut start = vec![0u32; k * total + 1];
    for q in 0..total {
        for a in 0..k {
            start[a * total + target(q, a) as usize + 1] += 1;
        }
    }
    for i in 0..k * total {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut preds = vec![0u32; start[k * total] as usize];
    for q in 0..total {
        for a in 0..k {
            let slot = a * total + target(q, a) as usize;
            preds[fill[slot] as usize] = q as u32;
            fill[slot] += 1;
        }
    }

    // initial partition by label
    let mut key_of: HashMap<u64, u32> = HashMap::new();
    let mut block = vec![0u32; total];
    for q in 0..total {
        let next = key_of.len() as u32;
        block[q] = *key_of.entry(labels[q]).or_insert(next);
    }
    let mut count = key_of.len();
    let mut sizes = vec![0u32; count];
    for &b in &block {
        sizes[b as usize] += 1;
    }
    let mut bstart = vec![0u32; count];
    for b in 1..count {
        bstart[b] = bstart[b - 1] + sizes[b - 1];
    }
    let mut bend: Vec<u32> = (0..count).map(|b| bstart[b] + sizes[b]).collect();
    let mut elems = vec![0u32; total];
    let mut pos = vec![0u32; total];
    {
        let mut cursor = bstart.clone();
        for q in 0..total {
            let b = block[q] as usize;
            elems[cursor[b] as usize] = q as u32;
            pos[q] = cursor[b];
            cursor[b] += 1;
        }
    }
    let mut marked = vec![0u32; count];

    let mut in_work = vec![false; count * k];
    let mut work: Vec<(u32, u32)> = Vec::new();
    for b in 0..count {
        for a in 0..k {
            in_work[b * k + a] = true;
            work.push((b as u32, a as u32));
        }
    }

    let mut splitter = Vec::new();
    let mut touched = Vec::new();
    while let Some((s, a)) = work.pop() {
        let (s, a) = (s as usize, a as usize);
        in_work[s * k + a] = false;
        splitter.clear();
        splitter.extend_from_slice(&elems[bstart[s] as usize..bend[s] as usize]);
        for &t in &splitter {
            let slot = a * total + t as usize;
            for &p in &preds[start[slot] as usize..start[slot + 1] as usize] {
                let b = block[p as usize] as usize;
                let boundary = bstart[b] + marked[b];
                let pp = pos[p as usize];
                if pp >= boundary {
                    // move p into the marked prefix of its block
                    let other = elems[boundary as usize];
                    elems[boundary as usize] = p;
                    elems[pp as usize] = other;
                    pos[p as usize] = boundary;
                    pos[other as usize] = pp;
                    if marked[b] == 0 {
                        touched.push(b);
                    }
                    marked[b] += 1;
                }
            }
        }
        for &b in &touched {
            let m = marked[b];
            marked[b] = 0;
            let size = bend[b] - bstart[b];
            if m == size {
                continue;
            }
            let c = count;
            count += 1;
            bstart.push(bstart[b]);
            bend.push(bstart[b] + m);
            marked.push(0);
            bstart[b] += m;
            for i in bstart[c]..bend[c] {
                block[elems[i as usize] as usize] = c as u32;
            }
            in_work.extend(std::iter::repeat_n(false, k));
            let smaller = if m <= size - m { c } else { b };
            for x in 0..k {
                if in_work[b * k + x] {
                    in_work[c * k + x] = true;
                    work.push((c as u32, x as u32));
                } else {
                    in_work[smaller * k + x] = true;
                    work.push((smaller as u32, x as u32));
                }
            }
        }
        touched.clear();
    }

    Classes {
        sink_block: block[n],
        block,
        count,
    }
}

/// Quotient table over the classes, with the dead class removed.
/// Returns the table and, per new state, one representative old state.
fn quotient(table: &Table, classes: &Classes) -> Option<(Table, Vec<StateId>)> {
    let n = table.len();
    let k = table.k();
    let init_block = classes.block[table.initial as usize];
    if init_block == classes.sink_block {
        return None;
    }
    let mut new_id = vec![NONE; classes.count];
    let mut reps = Vec::new();
    for q in 0..n {
        let b = classes.block[q] as usize;
        if b as u32 != classes.sink_block && new_id[b] == NONE {
            new_id[b] = reps.len() as StateId;
            reps.push(q as StateId);
        }
    }
    let mut delta = Vec::with_capacity(reps.len() * k);
    for &r in &reps {
        for a in 0..k {
            let t = table.delta[r as usize * k + a];
            delta.push(if t == NONE {
                NONE
            } else {
                new_id[classes.block[t as usize] as usize]
            });
        }
    }
    let quotient = Table {
        arity: table.arity,
        initial: new_id[init_block as usize],
        delta,
    };
    Some((quotient, reps))
}

pub(crate) fn minimize_dfa(dfa: &Dfa) -> Dfa {
    let trimmed = dfa.trim();
    // the sink is just another rejecting state
    let labels: Vec<u64> = trimmed
        .accepting
        .iter()
        .map(|&a| a as u64)
        .chain(std::iter::once(0))
        .collect();
    let classes = refine(
        trimmed.num_states(),
        trimmed.table.k(),
        &trimmed.table.delta,
        &labels,
    );
    match quotient(&trimmed.table, &classes) {
        Some((table, reps)) => {
            let accepting = reps
                .iter()
                .map(|&r| trimmed.accepting[r as usize])
                .collect();
            Dfa { table, accepting }.canonical()
        }
        None => empty_language(dfa.arity()),
    }
}

pub(crate) fn minimize_dfao(dfao: &Dfao) -> Dfao {
    let reach = dfao.canonical();
    // "no output" is a letter of its own
    let labels: Vec<u64> = reach
        .output
        .iter()
        .map(|&o| o as u64)
        .chain(std::iter::once(u64::MAX))
        .collect();
    let classes = refine(
        reach.num_states(),
        reach.table.k(),
        &reach.table.delta,
        &labels,
    );
    let (table, reps) =
        quotient(&reach.table, &classes).expect("outputs never join the dead class");
    let output = reps.iter().map(|&r| reach.output[r as usize]).collect();
    Dfao { table, output }.canonical()
}

fn empty_language(arity: usize) -> Dfa {
    Dfa::new(
        arity,
        0,
        vec![NONE; super::symbol_count(arity)],
        vec![false],
    )
    .expect("well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_equivalent_states() {
        // states 1 and 2 both accept exactly 0*; state 0 branches to both
        let d = Dfa::new(1, 0, vec![1, 2, 1, NONE, 2, NONE], vec![false, true, true]).unwrap();
        let m = d.minimize();
        assert_eq!(m.num_states(), 2);
        assert!(m.accepts_symbols(&[1, 0, 0]));
        assert!(!m.accepts_symbols(&[]));
    }

    #[test]
    fn empty_language_minimizes_to_single_rejecting_state() {
        let d = Dfa::new(1, 0, vec![0, 0], vec![false]).unwrap();
        let m = d.minimize();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.num_transitions(), 0);
        assert!(!m.is_accepting(0));
    }

    #[test]
    fn idempotent_on_minimal() {
        let d = Dfa::new(1, 0, vec![0, 1, 0, NONE], vec![true, true]).unwrap();
        let m = d.minimize();
        assert_eq!(m, m.minimize());
        assert_eq!(m.num_states(), 2);
    }

    #[test]
    fn dfao_split_by_output_and_partiality() {
        // 0 and 2 share output but only 0 may read a 1
        let d = Dfao::new(1, 0, vec![2, 1, 0, NONE, 2, NONE], vec![0, 1, 0]).unwrap();
        let m = d.minimize();
        assert_eq!(m.num_states(), 3);
    }
}
