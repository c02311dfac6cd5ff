//! Direct recognizers for arithmetic relations on Fibonacci representations.
//!
//! Every recognizer here tracks a linear form `D = Σ coef_j · [w_j]` over its
//! input tracks. Appending one column to every track obeys
//! `D_new = D_prevprev + D_prev + Σ coef_j (prev_digit_j + digit_j)`, so a
//! state needs the previous column, the current value of `D`, and its value
//! one column earlier. States whose `D` leaves a clamp interval are dead:
//! the interval is chosen so that no extension can come back to the target.

use std::collections::{HashMap, VecDeque};

use crate::automata::{self, product, project, symbol_count, Dfa, StateId, NONE};
use crate::constants::ADDER_INTERVAL;
use crate::error::{Error, Result};
use crate::numeration::encode;

/// State of a difference-tracking recognizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffState {
    /// Previous column, packed like a symbol (track 0 most significant).
    pub last: u32,
    /// Value of the tracked form on the input read so far.
    pub d: i64,
    /// Value of the tracked form one column earlier.
    pub d_prev: i64,
}

/// A forward-built recognizer before minimization, with its state labels.
#[derive(Clone, Debug)]
pub struct Labeled {
    pub dfa: Dfa,
    pub states: Vec<DiffState>,
}

/// Forward exploration from `[0, ..., 0]` with `D` clamped to `[lo, hi]`.
/// Accepting states have `D = target`.
pub fn difference_recognizer(coefs: &[i64], target: i64, lo: i64, hi: i64) -> Labeled {
    let arity = coefs.len();
    assert!((1..=automata::MAX_ARITY).contains(&arity));
    let k = symbol_count(arity);
    let weight = |sym: u32| -> i64 {
        (0..arity)
            .map(|j| coefs[j] * automata::digit(sym as usize, j, arity) as i64)
            .sum()
    };
    let weights: Vec<i64> = (0..k as u32).map(weight).collect();

    let start = DiffState {
        last: 0,
        d: 0,
        d_prev: 0,
    };
    let mut index: HashMap<DiffState, StateId> = HashMap::new();
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    index.insert(start, 0);
    while let Some(i) = queue.pop_front() {
        let cur = states[i];
        for s in 0..k as u32 {
            if cur.last & s != 0 {
                delta.push(NONE);
                continue;
            }
            let g = cur.d + cur.d_prev + weights[cur.last as usize] + weights[s as usize];
            if g < lo || g > hi {
                delta.push(NONE);
                continue;
            }
            let nxt = DiffState {
                last: s,
                d: g,
                d_prev: cur.d,
            };
            let id = *index.entry(nxt).or_insert_with(|| {
                states.push(nxt);
                queue.push_back(states.len() - 1);
                (states.len() - 1) as StateId
            });
            delta.push(id);
        }
    }
    let accepting = states.iter().map(|s| s.d == target).collect();
    Labeled {
        dfa: Dfa::new(arity, 0, delta, accepting).expect("well formed"),
        states,
    }
}

/// `x × y` with `[x] + c = [y]`, before minimization. `D = [y] − [x]`
/// clamped to `[0, c]`.
pub fn add_const_unminimized(c: u64) -> Labeled {
    let c = c as i64;
    difference_recognizer(&[-1, 1], c, 0, c)
}

/// Minimal recognizer of `x × y` with `[x] + c = [y]`.
pub fn add_const(c: u64) -> Dfa {
    add_const_unminimized(c).dfa.minimize()
}

/// Minimal recognizer of `x × y` with `[x] − c = [y]`: [`add_const`] with
/// its tracks swapped.
pub fn sub_const(c: u64) -> Dfa {
    add_const(c)
        .permute_tracks(&[1, 0])
        .expect("two-track permutation")
        .minimize()
}

/// The clamp interval `[−n, 2n − 1]` for `D = [y] − n[x]`.
pub fn affine_interval(n: u64) -> (i64, i64) {
    let n = n as i64;
    (-n, 2 * n - 1)
}

fn check_affine(n: u64, c: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("multiplier must be at least 1".into()));
    }
    if c >= n {
        return Err(Error::Parameter(format!(
            "offset {c} must be below the multiplier {n}"
        )));
    }
    Ok(())
}

/// `x × y` with `[y] = n[x] + c`, `0 ≤ c < n`, before minimization.
pub fn affine_unminimized(n: u64, c: u64) -> Result<Labeled> {
    check_affine(n, c)?;
    let (lo, hi) = affine_interval(n);
    Ok(difference_recognizer(&[-(n as i64), 1], c as i64, lo, hi))
}

/// Minimal recognizer of `x × y` with `[y] = n[x] + c`, `0 ≤ c < n`.
pub fn affine(n: u64, c: u64) -> Result<Dfa> {
    Ok(affine_unminimized(n, c)?.dfa.minimize())
}

/// `[y] = n[x] + c` for any `c`: for `c ≥ n` this composes `affine(n, 0)`
/// with `add_const(c)` through an existential middle track.
pub fn affine_any(n: u64, c: u64) -> Result<Dfa> {
    if c < n {
        return affine(n, c);
    }
    check_affine(n, 0)?;
    // tracks: x = 0, z = 1, y = 2 (the middle value)
    let p = product(&affine(n, 0)?, &[0, 2], &add_const(c), &[2, 1], 3)?;
    let nfa = project(&p.dfa.trim(), 2)?;
    Ok(automata::determinize(&nfa).automaton.minimize())
}

/// Accepts exactly `0^j · encode(c)`: a chain of `|encode(c)| + 1` states.
pub fn eq_const(c: u64) -> Dfa {
    let word = encode(c);
    let len = word.len();
    let n = len + 1;
    let mut delta = vec![NONE; n * 2];
    delta[0] = 0;
    for (i, &d) in word.digits().iter().enumerate() {
        delta[i * 2 + d as usize] = (i + 1) as StateId;
    }
    let mut accepting = vec![false; n];
    accepting[len] = true;
    Dfa::new(1, 0, delta, accepting).expect("well formed")
}

/// `x × y × z` with `[x] + [y] = [z]`, tracking `D = [z] − [x] − [y]` in
/// `[lo, hi]`, before minimization.
pub fn adder_with_interval(lo: i64, hi: i64) -> Labeled {
    difference_recognizer(&[-1, -1, 1], 0, lo, hi)
}

/// Minimal recognizer of `x × y × z` with `[x] + [y] = [z]`.
pub fn adder() -> Dfa {
    let (lo, hi) = ADDER_INTERVAL;
    adder_with_interval(lo, hi).dfa.minimize()
}

/// Extra information carried by a state of [`adder_annotated`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdderMemory {
    /// Current state of the minimal adder.
    pub state: StateId,
    /// Adder state one column earlier.
    pub prev_state: StateId,
    /// Last digit read on the first track.
    pub x_digit: u8,
    /// Last digit read on the third track.
    pub z_digit: u8,
}

/// The adder with one column of memory.
#[derive(Clone, Debug)]
pub struct AnnotatedAdder {
    pub dfa: Dfa,
    pub memory: Vec<AdderMemory>,
}

/// Product of the minimal adder with its previous state and the last digits
/// of the first and third tracks. Same language as [`adder`]; left
/// unminimized since minimization would collapse it back.
pub fn adder_annotated() -> AnnotatedAdder {
    let base = adder();
    let k = symbol_count(3);
    let start = AdderMemory {
        state: base.initial(),
        prev_state: base.initial(),
        x_digit: 0,
        z_digit: 0,
    };
    let mut index: HashMap<AdderMemory, StateId> = HashMap::new();
    let mut memory = vec![start];
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    index.insert(start, 0);
    while let Some(i) = queue.pop_front() {
        let cur = memory[i];
        for s in 0..k {
            let Some(t) = base.next(cur.state, s) else {
                delta.push(NONE);
                continue;
            };
            let nxt = AdderMemory {
                state: t,
                prev_state: cur.state,
                x_digit: automata::digit(s, 0, 3),
                z_digit: automata::digit(s, 2, 3),
            };
            let id = *index.entry(nxt).or_insert_with(|| {
                memory.push(nxt);
                queue.push_back(memory.len() - 1);
                (memory.len() - 1) as StateId
            });
            delta.push(id);
        }
    }
    let accepting = memory.iter().map(|m| base.is_accepting(m.state)).collect();
    AnnotatedAdder {
        dfa: Dfa::new(3, 0, delta, accepting).expect("well formed"),
        memory,
    }
}

/// Number of distinct `D` values in each backward level of the unminimized
/// [`add_const`] recognizer: level 0 holds the accepting states, level
/// `i + 1` every predecessor of level `i`. Stops once a level repeats.
pub fn add_const_level_widths(c: u64, max_levels: usize) -> Vec<usize> {
    let lab = add_const_unminimized(c);
    let dfa = &lab.dfa;
    let n = dfa.num_states();
    let k = symbol_count(2);
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for q in 0..n {
        for s in 0..k {
            if let Some(t) = dfa.next(q as StateId, s) {
                preds[t as usize].push(q as StateId);
            }
        }
    }
    let mut level: Vec<StateId> = (0..n as StateId).filter(|&q| dfa.is_accepting(q)).collect();
    let mut seen = std::collections::HashSet::new();
    let mut widths = Vec::new();
    while widths.len() < max_levels && !level.is_empty() && seen.insert(level.clone()) {
        let ds: std::collections::BTreeSet<i64> =
            level.iter().map(|&q| lab.states[q as usize].d).collect();
        widths.push(ds.len());
        let mut next: Vec<StateId> = level
            .iter()
            .flat_map(|&q| preds[q as usize].iter().copied())
            .collect();
        next.sort_unstable();
        next.dedup();
        level = next;
    }
    widths
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeration::pair_encode;

    fn accepts(d: &Dfa, v: &[u64]) -> bool {
        d.accepts(&pair_encode(v)).unwrap()
    }

    #[test]
    fn add_const_zero_is_valid_equality() {
        let d = add_const(0);
        // equality must remember a trailing 1 to forbid "11"
        assert_eq!(d.num_states(), 2);
        for x in 0..100 {
            for y in 0..100 {
                assert_eq!(accepts(&d, &[x, y]), x == y);
            }
        }
        assert!(!d.accepts_symbols(&[0b11, 0b11]));
    }

    #[test]
    fn add_const_one_examples() {
        let d = add_const(1);
        assert!(accepts(&d, &[4, 5]));
        assert!(!accepts(&d, &[4, 6]));
    }

    #[test]
    fn sub_const_examples() {
        assert!(accepts(&sub_const(3), &[7, 4]));
        assert!(!accepts(&sub_const(3), &[7, 5]));
        assert!(automata::equivalent(&sub_const(0), &add_const(0)).unwrap());
    }

    #[test]
    fn affine_examples() {
        let d = affine(3, 2).unwrap();
        assert!(accepts(&d, &[4, 14]));
        assert!(!accepts(&d, &[4, 13]));
        assert_eq!(affine(2, 0).unwrap().num_states(), 10);
        assert!(accepts(&affine(2, 0).unwrap(), &[4, 8]));
        assert!(affine(2, 2).is_err());
        assert!(affine(0, 0).is_err());
    }

    #[test]
    fn affine_any_large_offset() {
        let d = affine_any(2, 5).unwrap();
        for x in 0..80 {
            for y in 0..200 {
                assert_eq!(accepts(&d, &[x, y]), y == 2 * x + 5, "{x} {y}");
            }
        }
    }

    #[test]
    fn eq_const_chain() {
        let zero = eq_const(0);
        assert_eq!(zero.num_states(), 1);
        assert!(zero.accepts_symbols(&[0, 0]));
        let six = eq_const(6);
        assert_eq!(six.num_states(), 5);
        assert!(six.accepts_symbols(&[0, 0, 1, 0, 0, 1]));
        assert!(!six.accepts_symbols(&[1, 0, 0]));
        assert_eq!(six.minimize().num_states(), 5);
    }

    #[test]
    fn adder_examples() {
        let d = adder();
        assert!(accepts(&d, &[4, 7, 11]));
        assert!(!accepts(&d, &[4, 7, 12]));
        assert!(d.accepts_symbols(&[0, 0, 0]));
        let swapped = d.permute_tracks(&[1, 0, 2]).unwrap();
        assert!(automata::equivalent(&d, &swapped).unwrap());
    }

    #[test]
    fn annotated_adder_remembers_last_column() {
        let a = adder_annotated();
        let base = adder();
        assert!(automata::equivalent(&a.dfa, &base).unwrap());
        assert!(a.dfa.num_states() <= 8 * base.num_states());
        // one column [1, 0, 1]
        let q = a.dfa.next(a.dfa.initial(), 0b101).unwrap();
        let m = a.memory[q as usize];
        assert_eq!((m.x_digit, m.z_digit), (1, 1));
        assert_eq!(m.prev_state, base.initial());
    }

    #[test]
    fn add_const_levels_are_narrow() {
        for c in [1, 7, 50, 233, 1000] {
            let widths = add_const_level_widths(c, 200);
            assert!(!widths.is_empty());
            assert!(widths.iter().all(|&w| w <= 9), "c = {c}: {widths:?}");
        }
    }
}
