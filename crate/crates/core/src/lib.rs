//! Partially ordered automata.
//!
//! Core NFA operations, structural classification (poNFA, rpoNFA, ptNFA), deciders for
//! universality, inclusion, piecewise testability and k-piecewise testability, the
//! hardness gadgets that map formulas, DAGs and Turing machines to automata, and
//! brute-force oracles used to cross-check the deciders.

pub mod automaton;
pub mod classify;
pub mod constructions;
pub mod deciders;
pub mod dot;
pub mod error;
mod graph;
pub mod oracle;
pub mod piecewise;
pub mod random;

pub use automaton::{pad_alphabets, MacroState, Nfa, NfaBuilder, Symbol, Word};
pub use error::{Error, Result};
