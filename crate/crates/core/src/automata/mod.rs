//! Automata over k-track binary alphabets.
//!
//! A symbol of arity `k` is packed into an index `0..2^k`, track 0 being the
//! most significant bit, so numeric order on indices is lexicographic order
//! on digit tuples. Transition tables are dense; a missing transition is
//! [`NONE`] and stands for the dead state, which is never materialized or
//! counted.

mod determinize;
mod equivalence;
mod format;
mod machines;
mod minimize;
mod product;
mod project;

pub use determinize::{determinize, determinize_ufao, Determinized};
pub use equivalence::{
    counterexample, counterexample_dfao, equivalent, equivalent_dfao, isomorphic, isomorphic_dfao,
};
pub use format::{from_text, to_dot, to_dot_dfao, Automaton};
pub use machines::{Dfa, Dfao, Nfa, Ufao};
pub use product::{product, Product};
pub use project::project;

/// Dense state index.
pub type StateId = u32;

/// Output letter of a DFAO.
pub type Letter = u32;

/// Marker for a missing transition.
pub const NONE: StateId = StateId::MAX;

/// Largest supported number of tracks.
pub const MAX_ARITY: usize = 16;

/// Number of symbols over `arity` binary tracks.
#[inline]
pub fn symbol_count(arity: usize) -> usize {
    1usize << arity
}

/// Digit of `track` in the packed symbol `sym`.
#[inline]
pub fn digit(sym: usize, track: usize, arity: usize) -> u8 {
    ((sym >> (arity - 1 - track)) & 1) as u8
}

/// A k-tuple of binary digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    arity: u8,
    bits: u32,
}

impl Symbol {
    /// Panics on digits other than 0/1 or arity outside `1..=MAX_ARITY`.
    pub fn from_digits(digits: &[u8]) -> Symbol {
        assert!((1..=MAX_ARITY).contains(&digits.len()));
        let bits = digits.iter().fold(0u32, |acc, &d| {
            assert!(d <= 1);
            (acc << 1) | d as u32
        });
        Symbol {
            arity: digits.len() as u8,
            bits,
        }
    }

    pub fn from_index(arity: usize, index: usize) -> Symbol {
        assert!((1..=MAX_ARITY).contains(&arity) && index < symbol_count(arity));
        Symbol {
            arity: arity as u8,
            bits: index as u32,
        }
    }

    pub fn arity(self) -> usize {
        self.arity as usize
    }

    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn digits(self) -> Vec<u8> {
        (0..self.arity())
            .map(|t| digit(self.index(), t, self.arity()))
            .collect()
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }
}
