//! Universality of an rpoNFA as piecewise testability of an extended rpoNFA.

use crate::automaton::{Nfa, NfaBuilder, Symbol};
use crate::classify::is_rponfa;
use crate::error::{Error, Result};

fn fresh_symbol(taken: &[Symbol], base: &str) -> Symbol {
    let mut name = base.to_string();
    while taken.iter().any(|s| s.as_str() == name) {
        name.push('\'');
    }
    Symbol::new(name).expect("valid symbol")
}

/// Adds two fresh letters `a`, `b` and states `1` (the only accepting state) and `2`, both
/// looping on every letter. Non-accepting states of `a` go to `1` on `a` and to `2` on `b`;
/// accepting states go to `1` on both. The result is PT iff `a` is universal, and then its
/// language is `Σ*(a+b)(Σ ∪ {a,b})*`.
///
/// Fresh names get primes appended if `a`, `b`, `1` or `2` are already used. The input needs
/// an initial state: with none, both languages are empty and the equivalence fails.
pub fn pt_hardness_gadget(a: &Nfa) -> Result<Nfa> {
    if !is_rponfa(a) {
        return Err(Error::NotRpoNfa);
    }
    if a.initial().is_empty() {
        return Err(Error::NoInitialState);
    }
    let x = fresh_symbol(a.alphabet(), "a");
    let y = fresh_symbol(a.alphabet(), "b");
    let mut b = NfaBuilder::with_alphabet(a.alphabet());
    b.set_name("pt-hardness");
    let xi = b.add_symbol(x);
    let yi = b.add_symbol(y);
    for q in a.states() {
        b.add_state(q.clone())?;
    }
    for (p, s, q) in a.transitions() {
        b.add_transition(p, s, q);
    }
    for &q in a.initial() {
        b.set_initial(q);
    }
    let one = b.fresh_state("1");
    let two = b.fresh_state("2");
    for q in 0..a.num_states() {
        b.add_transition(q, xi, one);
        b.add_transition(q, yi, if a.is_accepting(q) { one } else { two });
    }
    for s in 0..b.num_symbols() {
        b.add_transition(one, s, one);
        b.add_transition(two, s, two);
    }
    b.set_accepting(one);
    Ok(b.build())
}
