use proptest::prelude::*;

use zeckendorf_automata::automata::{
    counterexample, determinize, equivalent, from_text, symbol_count, Automaton, Dfa, Nfa, NONE,
};
use zeckendorf_automata::numeration::{encode, pair_encode, value, ZeckWord};
use zeckendorf_automata::relations::{add_const, adder, affine};
use zeckendorf_automata::subsequences::{fib_thue_morse, linear_subseq, shift};

fn nfa_strategy() -> impl Strategy<Value = Nfa> {
    (1usize..=8, 1usize..=2).prop_flat_map(|(n, arity)| {
        let k = symbol_count(arity);
        (
            prop::collection::vec(prop::collection::vec(0..n as u32, 0..=2), n * k),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(0..n as u32, 1..=2),
        )
            .prop_map(move |(delta, accepting, initial)| {
                Nfa::new(arity, initial, delta, accepting).unwrap()
            })
    })
}

fn dfa_strategy() -> impl Strategy<Value = Dfa> {
    (1usize..=6, 1usize..=2).prop_flat_map(|(n, arity)| {
        let k = symbol_count(arity);
        (
            prop::collection::vec(prop_oneof![Just(NONE), 0..n as u32], n * k),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(delta, accepting)| Dfa::new(arity, 0, delta, accepting).unwrap())
    })
}

/// Every word of length at most `max` over `k` symbols.
fn all_words(k: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..k {
                let mut v: Vec<usize> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encode_round_trips(i in 0u64..1_000_000_000_000) {
        let w = encode(i);
        prop_assert!(w.is_canonical());
        prop_assert_eq!(w.value(), i);
        prop_assert_eq!(w.to_string().parse::<ZeckWord>().unwrap(), w);
    }

    #[test]
    fn leading_zeros_do_not_change_value(i in 0u64..1_000_000, pad in 0usize..6) {
        let w = encode(i);
        prop_assert_eq!(value(w.padded(w.len() + pad).digits()), i);
    }

    #[test]
    fn determinize_preserves_language(nfa in nfa_strategy()) {
        let dfa = determinize(&nfa).automaton;
        let max = if nfa.arity() == 1 { 10 } else { 5 };
        for w in all_words(symbol_count(nfa.arity()), max) {
            prop_assert_eq!(dfa.accepts_symbols(&w), nfa.accepts_symbols(&w), "{:?}", w);
        }
    }

    #[test]
    fn minimize_preserves_language_and_is_idempotent(nfa in nfa_strategy()) {
        let dfa = determinize(&nfa).automaton;
        let min = dfa.minimize();
        prop_assert!(min.num_states() <= dfa.num_states().max(1));
        prop_assert_eq!(min.minimize(), min.clone());
        let max = if nfa.arity() == 1 { 10 } else { 5 };
        for w in all_words(symbol_count(nfa.arity()), max) {
            prop_assert_eq!(min.accepts_symbols(&w), dfa.accepts_symbols(&w));
        }
    }

    #[test]
    fn counterexample_iff_inequivalent(a in dfa_strategy(), b in dfa_strategy()) {
        prop_assume!(a.arity() == b.arity());
        let eq = equivalent(&a, &b).unwrap();
        match counterexample(&a, &b).unwrap() {
            None => prop_assert!(eq),
            Some(w) => {
                prop_assert!(!eq);
                prop_assert_ne!(a.accepts_symbols(&w), b.accepts_symbols(&w));
            }
        }
    }

    #[test]
    fn text_format_round_trips(d in dfa_strategy()) {
        let text = d.to_text();
        prop_assert_eq!(from_text(&text).unwrap(), Automaton::Dfa(d));
    }

    #[test]
    fn relations_ignore_leading_zeros(x in 0u64..5000, c in 0u64..300, n in 1u64..8, pad in 1usize..=5) {
        let w = pair_encode(&[x, x + c]);
        prop_assert!(add_const(c).accepts(&w.padded_by(pad)).unwrap());
        let a = affine(n, x % n).unwrap();
        prop_assert!(a.accepts(&pair_encode(&[x, n * x + x % n]).padded_by(pad)).unwrap());
        prop_assert!(!a.accepts(&pair_encode(&[x, n * x + x % n + 1]).padded_by(pad)).unwrap());
        prop_assert!(adder().accepts(&pair_encode(&[x, c, x + c]).padded_by(pad)).unwrap());
    }

    #[test]
    fn sequences_ignore_leading_zeros(i in 0u64..100_000, c in 0usize..20, pad in 1usize..=5) {
        let syms: Vec<usize> = encode(i).digits().iter().map(|&d| d as usize).collect();
        let mut padded = vec![0; pad];
        padded.extend_from_slice(&syms);
        for m in [shift(&fib_thue_morse(), c).unwrap(), linear_subseq(&fib_thue_morse(), 5, 2).unwrap()] {
            prop_assert_eq!(m.run_symbols(&padded).unwrap(), m.run_symbols(&syms).unwrap());
        }
    }
}
