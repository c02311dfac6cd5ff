//! Fibonacci-automatic sequences: builders, shifted and linear
//! subsequences, morphisms and factor counts.
//!
//! A sequence DFAO has arity 1 and is read on valid words, most significant
//! digit first; its value on `i` is its output on `encode(i)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::automata::{determinize_ufao, Determinized, Dfao, Letter, Nfa, StateId, Ufao, NONE};
use crate::error::{Error, Result};
use crate::numeration::encode;
use crate::relations::affine_interval;

/// The Fibonacci word `0100101001001...`: last digit of `encode(i)`.
pub fn fib_word() -> Dfao {
    Dfao::new(1, 0, vec![0, 1, 0, NONE], vec![0, 1]).expect("well formed")
}

/// Parity of the number of 1s in `encode(i)`. States are (parity, last digit).
pub fn fib_thue_morse() -> Dfao {
    // 0 = (0,0), 1 = (1,1), 2 = (1,0), 3 = (0,1)
    let delta = vec![0, 1, 2, NONE, 2, 3, 0, NONE];
    Dfao::new(1, 0, delta, vec![0, 1, 1, 0]).expect("well formed")
}

/// The interior DFAO: outputs replaced by state ids.
pub fn interior(m: &Dfao) -> Dfao {
    m.interior()
}

/// First `len` values of the sequence.
pub fn prefix(m: &Dfao, len: usize) -> Result<Vec<Letter>> {
    (0..len as u64).map(|i| m.eval(i)).collect()
}

/// A shift DFAO before minimization, with the window behind each state.
#[derive(Clone, Debug)]
pub struct ShiftBuild {
    pub dfao: Dfao,
    /// Per state: pairs (state of the minimized source, last digit) for the
    /// values `v, v + 1, ..., v + c`.
    pub windows: Vec<Vec<(StateId, u8)>>,
}

/// Window construction for `i ↦ h(i + c)`, where `h` is computed by `m`.
/// The source is minimized first; window states refer to that DFAO.
pub fn shift_windows(m: &Dfao, c: usize) -> Result<ShiftBuild> {
    let h = m.minimize();
    let mut start = Vec::with_capacity(c + 1);
    for j in 0..=c as u64 {
        let w = encode(j);
        let syms: Vec<usize> = w.digits().iter().map(|&d| d as usize).collect();
        start.push((h.state_after(&syms)?, w.last().unwrap_or(0)));
    }

    let mut index: HashMap<Vec<(StateId, u8)>, StateId> = HashMap::new();
    let mut windows = vec![start.clone()];
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    index.insert(start, 0);
    let mut spread = Vec::with_capacity(2 * c + 2);
    while let Some(i) = queue.pop_front() {
        spread.clear();
        for &(p, a) in &windows[i] {
            let zero = h
                .next(p, 0)
                .ok_or_else(|| Error::Malformed(format!("state {p} has no 0-transition")))?;
            spread.push((zero, 0u8));
            if a == 0 {
                let one = h
                    .next(p, 1)
                    .ok_or_else(|| Error::Malformed(format!("state {p} has no 1-transition")))?;
                spread.push((one, 1));
            }
        }
        for a in 0..2usize {
            // reading a 1 right after a 1 is not a valid word
            if a == 1 && windows[i][0].1 == 1 {
                delta.push(NONE);
                continue;
            }
            let next: Vec<(StateId, u8)> = spread[a..a + c + 1].to_vec();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = windows.len() as StateId;
                    index.insert(next.clone(), id);
                    windows.push(next);
                    queue.push_back(id as usize);
                    id
                }
            };
            delta.push(id);
        }
    }
    let output = windows.iter().map(|w| h.output(w[c].0)).collect();
    Ok(ShiftBuild {
        dfao: Dfao::new(1, 0, delta, output)?,
        windows,
    })
}

/// Minimal DFAO for `i ↦ h(i + c)`.
pub fn shift(m: &Dfao, c: usize) -> Result<Dfao> {
    Ok(shift_windows(m, c)?.dfao.minimize())
}

/// A state of the unambiguous automaton behind [`linear_subseq`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinearState {
    pub a_prev: u8,
    pub b_prev: u8,
    /// `[y] − n[x]` on the input read so far.
    pub d: i64,
    pub d_prev: i64,
    /// State of the source DFAO after reading the guessed `y`.
    pub q: StateId,
}

/// Every stage of a [`linear_subseq`] build.
#[derive(Clone, Debug)]
pub struct LinearBuild {
    pub ufao: Ufao,
    pub states: Vec<LinearState>,
    pub determinized: Determinized<Dfao>,
    pub dfao: Dfao,
}

fn check_linear(n: u64, c: u64) -> Result<()> {
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

/// The automaton that guesses `y` with `[y] = n[x] + c` digit by digit and
/// runs `h` on it.
pub fn linear_ufao(h: &Dfao, n: u64, c: u64) -> Result<(Ufao, Vec<LinearState>)> {
    check_linear(n, c)?;
    if h.arity() != 1 {
        return Err(Error::Arity {
            expected: 1,
            found: h.arity(),
        });
    }
    let (lo, hi) = affine_interval(n);
    let n = n as i64;
    let step = |s: &LinearState, a: u8| -> Vec<LinearState> {
        let mut out = Vec::new();
        if s.a_prev & a == 1 {
            return out;
        }
        for b in 0..2u8 {
            if s.b_prev & b == 1 {
                continue;
            }
            let g =
                s.d + s.d_prev + s.b_prev as i64 - n * s.a_prev as i64 + b as i64 - n * a as i64;
            if g < lo || g > hi {
                continue;
            }
            if let Some(q) = h.next(s.q, b as usize) {
                out.push(LinearState {
                    a_prev: a,
                    b_prev: b,
                    d: g,
                    d_prev: s.d,
                    q,
                });
            }
        }
        out
    };

    let mut index: HashMap<LinearState, StateId> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern =
        |s: LinearState, states: &mut Vec<LinearState>, queue: &mut VecDeque<usize>| -> StateId {
            *index.entry(s).or_insert_with(|| {
                states.push(s);
                queue.push_back(states.len() - 1);
                (states.len() - 1) as StateId
            })
        };

    let start = LinearState {
        a_prev: 0,
        b_prev: 0,
        d: 0,
        d_prev: 0,
        q: h.initial(),
    };
    intern(start, &mut states, &mut queue);
    // initial set: everything reachable while x reads only zeros
    let mut initial = Vec::new();
    let mut closure = VecDeque::from([0usize]);
    let mut in_closure = HashSet::from([0usize]);
    while let Some(i) = closure.pop_front() {
        initial.push(i as StateId);
        for t in step(&states[i].clone(), 0) {
            let id = intern(t, &mut states, &mut queue) as usize;
            if in_closure.insert(id) {
                closure.push_back(id);
            }
        }
    }

    let mut delta: Vec<Vec<StateId>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        if delta.len() < (i + 1) * 2 {
            delta.resize((i + 1) * 2, Vec::new());
        }
        for a in 0..2u8 {
            let targets: Vec<StateId> = step(&states[i].clone(), a)
                .into_iter()
                .map(|t| intern(t, &mut states, &mut queue))
                .collect();
            delta[i * 2 + a as usize] = targets;
        }
    }
    delta.resize(states.len() * 2, Vec::new());

    let c = c as i64;
    let accepting: Vec<bool> = states.iter().map(|s| s.d == c).collect();
    let output = states
        .iter()
        .map(|s| (s.d == c).then(|| h.output(s.q)))
        .collect();
    let nfa = Nfa::new(1, initial, delta, accepting)?;
    Ok((Ufao::new(nfa, output)?, states))
}

/// All stages of the DFAO for `i ↦ h(n·i + c)`, `0 ≤ c < n`.
pub fn linear_subseq_build(m: &Dfao, n: u64, c: u64) -> Result<LinearBuild> {
    let h = m.minimize();
    let (ufao, states) = linear_ufao(&h, n, c)?;
    let determinized = determinize_ufao(&ufao)?;
    let dfao = determinized.automaton.minimize();
    Ok(LinearBuild {
        ufao,
        states,
        determinized,
        dfao,
    })
}

/// Minimal DFAO for `i ↦ h(n·i + c)`, `0 ≤ c < n`.
pub fn linear_subseq(m: &Dfao, n: u64, c: u64) -> Result<Dfao> {
    Ok(linear_subseq_build(m, n, c)?.dfao)
}

/// A prolongable morphism with a coding, read off a sequence DFAO.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    /// Image of each letter; letters are `0..rules.len()`.
    pub rules: Vec<Vec<Letter>>,
    pub coding: Vec<Letter>,
    pub start: Letter,
}

impl Morphism {
    pub fn num_letters(&self) -> usize {
        self.rules.len()
    }

    /// Total length of all images.
    pub fn size(&self) -> usize {
        self.rules.iter().map(Vec::len).sum()
    }

    pub fn code(&self, word: &[Letter]) -> Vec<Letter> {
        word.iter().map(|&a| self.coding[a as usize]).collect()
    }
}

impl fmt::Display for Morphism {
    /// One line per letter: `a -> w1 w2 ; coding a -> o`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, image) in self.rules.iter().enumerate() {
            let image: Vec<String> = image.iter().map(|b| b.to_string()).collect();
            writeln!(
                f,
                "{a} -> {} ; coding {a} -> {}",
                image.join(" "),
                self.coding[a]
            )?;
        }
        Ok(())
    }
}

/// Letters are states; the image of `q` lists its 0-successor and, when
/// defined, its 1-successor.
pub fn to_morphism(m: &Dfao) -> Result<Morphism> {
    if m.arity() != 1 {
        return Err(Error::Arity {
            expected: 1,
            found: m.arity(),
        });
    }
    let rules = (0..m.num_states() as StateId)
        .map(|q| {
            let zero = m
                .next(q, 0)
                .ok_or_else(|| Error::Malformed(format!("state {q} has no 0-transition")))?;
            let mut image = vec![zero];
            image.extend(m.next(q, 1));
            Ok(image)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Morphism {
        rules,
        coding: m.outputs().to_vec(),
        start: m.initial(),
    })
}

/// First `len` letters of the fixed point starting with `start`, uncoded.
pub fn iterate_morphism(mo: &Morphism, len: usize) -> Result<Vec<Letter>> {
    let first = mo
        .rules
        .get(mo.start as usize)
        .ok_or(Error::NotProlongable)?;
    if first.first() != Some(&mo.start) || first.len() < 2 {
        return Err(Error::NotProlongable);
    }
    let mut seq = first.clone();
    let mut i = 1;
    while seq.len() < len {
        let image = mo.rules.get(seq[i] as usize).ok_or(Error::NotProlongable)?;
        seq.extend_from_slice(image);
        i += 1;
    }
    seq.truncate(len);
    Ok(seq)
}

fn distinct_factors(seq: &[Letter], len: usize) -> usize {
    seq.windows(len).collect::<HashSet<_>>().len()
}

/// Number of distinct length-`len` factors of the sequence.
///
/// Heuristic: counts factors of a prefix of `max(10·len·m², 10⁴)` letters
/// (`m` states) and doubles the prefix until the count is unchanged twice
/// in a row. Any factor that first occurs beyond the final prefix is missed.
pub fn subword_count(m: &Dfao, len: usize) -> Result<usize> {
    if len == 0 {
        return Ok(1);
    }
    let states = m.num_states();
    let mut size = (10 * len * states * states).max(10_000);
    let mut seq = prefix(m, size)?;
    let mut count = distinct_factors(&seq, len);
    let mut stable = 0;
    while stable < 2 {
        let more = prefix_from(m, size, 2 * size)?;
        seq.extend(more);
        size *= 2;
        let next = distinct_factors(&seq, len);
        stable = if next == count { stable + 1 } else { 0 };
        count = next;
    }
    Ok(count)
}

fn prefix_from(m: &Dfao, from: usize, to: usize) -> Result<Vec<Letter>> {
    (from as u64..to as u64).map(|i| m.eval(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{equivalent_dfao, isomorphic_dfao};

    fn popcount_parity(i: u64) -> Letter {
        (encode(i).digits().iter().filter(|&&d| d == 1).count() % 2) as Letter
    }

    fn last_digit(i: u64) -> Letter {
        encode(i).last().unwrap_or(0) as Letter
    }

    #[test]
    fn fib_word_prefix() {
        assert_eq!(
            prefix(&fib_word(), 8).unwrap(),
            vec![0, 1, 0, 0, 1, 0, 1, 0]
        );
        for i in 0..2000 {
            assert_eq!(fib_word().eval(i).unwrap(), last_digit(i));
        }
    }

    #[test]
    fn thue_morse_matches_popcount() {
        let t = fib_thue_morse();
        for i in 0..2000 {
            assert_eq!(t.eval(i).unwrap(), popcount_parity(i), "i = {i}");
        }
        assert_eq!(t.minimize().num_states(), 4);
    }

    #[test]
    fn interior_then_coding() {
        let m = fib_thue_morse();
        let inner = interior(&m);
        let coded = inner.map_outputs(|q| m.output(q));
        for i in 0..1000 {
            assert_eq!(coded.eval(i).unwrap(), m.eval(i).unwrap());
        }
        assert_eq!(interior(&fib_word()).outputs(), &[0, 1]);
    }

    #[test]
    fn shift_of_fib_word() {
        assert_eq!(
            prefix(&shift(&fib_word(), 1).unwrap(), 7).unwrap(),
            vec![1, 0, 0, 1, 0, 1, 0]
        );
        assert!(equivalent_dfao(&shift(&fib_word(), 0).unwrap(), &fib_word()).unwrap());
    }

    #[test]
    fn shift_windows_are_coherent() {
        let m = fib_thue_morse();
        let c = 5;
        let build = shift_windows(&m, c).unwrap();
        let h = m.minimize();
        for v in 0..3000u64 {
            let syms: Vec<usize> = encode(v).digits().iter().map(|&d| d as usize).collect();
            let q = build.dfao.state_after(&syms).unwrap();
            let window = &build.windows[q as usize];
            for (j, &(p, a)) in window.iter().enumerate() {
                let u = v + j as u64;
                assert_eq!(a as Letter, last_digit(u));
                assert_eq!(h.output(p), popcount_parity(u));
            }
        }
    }

    #[test]
    fn linear_subseq_of_fib_word() {
        assert!(isomorphic_dfao(
            &linear_subseq(&fib_word(), 1, 0).unwrap(),
            &fib_word()
        ));
        let f2 = linear_subseq(&fib_word(), 2, 0).unwrap();
        assert_eq!(f2.num_states(), 5);
        for i in 0..2000 {
            assert_eq!(f2.eval(i).unwrap(), last_digit(2 * i));
        }
        assert!(linear_subseq(&fib_word(), 2, 2).is_err());
    }

    #[test]
    fn linear_subsets_have_consecutive_differences() {
        for n in 1..=6 {
            for c in 0..n {
                let b = linear_subseq_build(&fib_thue_morse(), n, c).unwrap();
                for set in &b.determinized.subsets {
                    let mut ds: Vec<i64> = set.iter().map(|&q| b.states[q as usize].d).collect();
                    ds.sort_unstable();
                    ds.dedup();
                    // each difference occurs in exactly one member
                    assert_eq!(ds.len(), set.len());
                    assert_eq!(
                        ds.len() as i64,
                        ds[ds.len() - 1] - ds[0] + 1,
                        "n={n} c={c} {ds:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn morphism_of_fib_word() {
        let mo = to_morphism(&fib_word()).unwrap();
        assert_eq!(mo.rules, vec![vec![0, 1], vec![0]]);
        assert_eq!(mo.size(), 3);
        assert_eq!(
            iterate_morphism(&mo, 8).unwrap(),
            vec![0, 1, 0, 0, 1, 0, 1, 0]
        );
    }

    #[test]
    fn morphism_of_even_positions() {
        let mo = to_morphism(&linear_subseq(&fib_word(), 2, 0).unwrap()).unwrap();
        assert_eq!(
            mo.rules,
            vec![vec![0, 1], vec![2], vec![3, 1], vec![0, 4], vec![0]]
        );
        assert_eq!(mo.coding, vec![0, 0, 1, 1, 1]);
        let word = iterate_morphism(&mo, 8).unwrap();
        assert_eq!(word, vec![0, 1, 2, 3, 1, 0, 4, 2]);
        assert_eq!(mo.code(&word), vec![0, 0, 1, 1, 0, 0, 1, 1]);
        let long = mo.code(&iterate_morphism(&mo, 3000).unwrap());
        for (i, &v) in long.iter().enumerate() {
            assert_eq!(v, last_digit(2 * i as u64));
        }
        assert_eq!(
            mo.to_string().lines().next(),
            Some("0 -> 0 1 ; coding 0 -> 0")
        );
    }

    #[test]
    fn non_prolongable_rejected() {
        let mo = Morphism {
            rules: vec![vec![1, 0], vec![0]],
            coding: vec![0, 1],
            start: 0,
        };
        assert!(matches!(
            iterate_morphism(&mo, 4),
            Err(Error::NotProlongable)
        ));
    }

    #[test]
    fn subword_counts() {
        assert_eq!(subword_count(&fib_word(), 1).unwrap(), 2);
        assert_eq!(subword_count(&fib_word(), 5).unwrap(), 6);
    }
}
