use super::machines::{Dfa, Nfa};
use super::{symbol_count, StateId, NONE};
use crate::error::{Error, Result};

/// Existential projection of `track`.
///
/// The result reads the remaining tracks in their original order. Its
/// initial set is the closure of the initial state under columns that are
/// zero on every surviving track: a witness for the removed track may need
/// more digits than the surviving inputs, which then read as leading zeros.
pub fn project(dfa: &Dfa, track: usize) -> Result<Nfa> {
    let arity = dfa.arity();
    if track >= arity {
        return Err(Error::TrackMap(format!(
            "track {track} outside arity {arity}"
        )));
    }
    if arity == 1 {
        return Err(Error::TrackMap("cannot project the only track".into()));
    }
    let out_arity = arity - 1;
    let k_in = symbol_count(arity);
    let k_out = symbol_count(out_arity);
    // bit position (from the least significant end) of the removed track
    let bit = arity - 1 - track;
    let widen = |r: usize, b: usize| -> usize {
        let high = (r >> bit) << (bit + 1);
        let low = r & ((1 << bit) - 1);
        high | (b << bit) | low
    };

    let n = dfa.num_states();
    let mut delta = vec![Vec::new(); n * k_out];
    for q in 0..n {
        for r in 0..k_out {
            let cell = &mut delta[q * k_out + r];
            for b in 0..2 {
                let t = dfa.delta()[q * k_in + widen(r, b)];
                if t != NONE {
                    cell.push(t);
                }
            }
        }
    }

    // zero-closure of the initial state; the all-zero surviving column is r = 0
    let mut in_init = vec![false; n];
    let mut stack = vec![dfa.initial()];
    in_init[dfa.initial() as usize] = true;
    while let Some(q) = stack.pop() {
        for &t in &delta[q as usize * k_out] {
            if !in_init[t as usize] {
                in_init[t as usize] = true;
                stack.push(t);
            }
        }
    }
    let initial: Vec<StateId> = (0..n as StateId).filter(|&q| in_init[q as usize]).collect();

    Nfa::new(out_arity, initial, delta, dfa.accepting().to_vec())
}
