//! Finite automata over the Fibonacci (Zeckendorf) numeration system.
//!
//! The crate builds recognizers for affine relations `[y] = n[x] + c`,
//! DFAOs for shifted and linear subsequences of Fibonacci-automatic
//! sequences, and reproduces the same automata through a generic
//! product / projection / determinization / minimization pipeline so the
//! two routes can be compared against each other and against brute force.

pub mod automata;
pub mod buchi;
pub mod constants;
pub mod error;
pub mod numeration;
pub mod relations;
pub mod subsequences;
pub mod verify;

pub use error::{Error, Result};
