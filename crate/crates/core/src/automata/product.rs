use std::collections::{HashMap, VecDeque};

use super::machines::Dfa;
use super::{digit, symbol_count, StateId, MAX_ARITY, NONE};
use crate::error::{Error, Result};

/// Reachable part of a synchronized product, with the component states of
/// every product state.
#[derive(Clone, Debug)]
pub struct Product {
    pub dfa: Dfa,
    pub pairs: Vec<(StateId, StateId)>,
}

/// For each result symbol, the symbol seen by a component reading `tracks`.
fn symbol_map(tracks: &[usize], arity: usize) -> Vec<usize> {
    let k = tracks.len();
    (0..symbol_count(arity))
        .map(|s| {
            tracks
                .iter()
                .enumerate()
                .map(|(i, &t)| (digit(s, t, arity) as usize) << (k - 1 - i))
                .sum()
        })
        .collect()
}

/// Intersection of `a` and `b` over `arity` shared tracks.
///
/// Track `i` of `a` reads result track `a_tracks[i]`, and likewise for `b`.
/// Several component tracks may read the same result track, which is how
/// `M(y, y, x)`-style argument repetition is expressed. Only reachable pairs
/// are built.
pub fn product(
    a: &Dfa,
    a_tracks: &[usize],
    b: &Dfa,
    b_tracks: &[usize],
    arity: usize,
) -> Result<Product> {
    if !(1..=MAX_ARITY).contains(&arity) {
        return Err(Error::TrackMap(format!(
            "result arity {arity} out of range"
        )));
    }
    for (m, tracks) in [(a, a_tracks), (b, b_tracks)] {
        if tracks.len() != m.arity() {
            return Err(Error::Arity {
                expected: m.arity(),
                found: tracks.len(),
            });
        }
        if let Some(&t) = tracks.iter().find(|&&t| t >= arity) {
            return Err(Error::TrackMap(format!(
                "track {t} outside result arity {arity}"
            )));
        }
    }
    let k = symbol_count(arity);
    let amap = symbol_map(a_tracks, arity);
    let bmap = symbol_map(b_tracks, arity);

    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = Vec::new();
    let mut delta = Vec::new();
    let mut queue = VecDeque::new();
    let start = (a.initial(), b.initial());
    index.insert(start, 0);
    pairs.push(start);
    queue.push_back(start);
    while let Some((p, q)) = queue.pop_front() {
        for s in 0..k {
            let t = match (a.next(p, amap[s]), b.next(q, bmap[s])) {
                (Some(p2), Some(q2)) => {
                    let next = pairs.len() as StateId;
                    *index.entry((p2, q2)).or_insert_with(|| {
                        pairs.push((p2, q2));
                        queue.push_back((p2, q2));
                        next
                    })
                }
                _ => NONE,
            };
            delta.push(t);
        }
    }
    let accepting = pairs
        .iter()
        .map(|&(p, q)| a.is_accepting(p) && b.is_accepting(q))
        .collect();
    let dfa = Dfa::new(arity, 0, delta, accepting)?;
    Ok(Product { dfa, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeration::pair_encode;

    /// Accepts 0* then the digits of `word`.
    fn chain(word: &[u8]) -> Dfa {
        let n = word.len() + 1;
        let mut delta = vec![NONE; n * 2];
        delta[0] = 0;
        for (i, &d) in word.iter().enumerate() {
            if !(i == 0 && d == 0) {
                delta[i * 2 + d as usize] = (i + 1) as StateId;
            }
        }
        let mut acc = vec![false; n];
        acc[n - 1] = true;
        Dfa::new(1, 0, delta, acc).unwrap()
    }

    #[test]
    fn universal_is_identity() {
        let m = chain(&[1, 0, 0, 1]);
        let p = product(&Dfa::universal(1), &[0], &m, &[0], 1).unwrap();
        assert!(crate::automata::equivalent(&p.dfa, &m).unwrap());
    }

    #[test]
    fn disjoint_tracks_give_pairs() {
        let one = chain(&[1]);
        let two = chain(&[1, 0]);
        let p = product(&one, &[0], &two, &[1], 2).unwrap();
        for x in 0..20u64 {
            for y in 0..20u64 {
                let w = pair_encode(&[x, y]);
                assert_eq!(p.dfa.accepts(&w).unwrap(), x == 1 && y == 2, "{x} {y}");
            }
        }
    }

    #[test]
    fn rejects_bad_track_maps() {
        let one = chain(&[1]);
        assert!(product(&one, &[0, 1], &one, &[0], 2).is_err());
        assert!(product(&one, &[2], &one, &[0], 2).is_err());
    }
}
