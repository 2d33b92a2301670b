//! The gadget `M_k`: a prefix chain that makes `L(M_k)` k-PT exactly when `L(M)` is universal.

use crate::automaton::{Nfa, NfaBuilder};
use crate::error::{Error, Result};

/// For every initial state `i_j` of `m`, adds a chain `i_{j,1} -> ... -> i_{j,|Σ|k} -> i_j`
/// on all letters. The chain starts are the new initial states and `i_{j,k+1}, ..., i_{j,|Σ|k}`
/// are added to the accepting states. Needs `k >= 1` and `L(m) ≠ ∅`.
pub fn mk_gadget(m: &Nfa, k: usize) -> Result<Nfa> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if m.num_symbols() == 0 {
        return Err(Error::InvalidParameter("the alphabet is empty".into()));
    }
    if m.is_empty().0 {
        return Err(Error::EmptyLanguage);
    }
    let len = m.num_symbols() * k;
    let mut b = NfaBuilder::with_alphabet(m.alphabet());
    b.set_name(format!("M_{k}"));
    for q in m.states() {
        b.add_state(q.clone())?;
    }
    for (p, a, q) in m.transitions() {
        b.add_transition(p, a, q);
    }
    for q in m.accepting_states() {
        b.set_accepting(q);
    }
    for (j, &init) in m.initial().iter().enumerate() {
        let chain: Vec<usize> = (1..=len).map(|l| b.fresh_state(&format!("i_{}_{l}", j + 1))).collect();
        for (l, &c) in chain.iter().enumerate() {
            let next = chain.get(l + 1).copied().unwrap_or(init);
            for a in 0..m.num_symbols() {
                b.add_transition(c, a, next);
            }
            if l >= k {
                b.set_accepting(c);
            }
        }
        b.set_initial(chain[0]);
    }
    Ok(b.build())
}

/// The pair `((a_1 ... a_c)^k x, (a_1 ... a_c)^k y)` for `x ∈ L(m)` and `y ∉ L(m)`, which are
/// `∼_k`-equivalent and separated by `L(M_k)`.
pub fn mk_witness_pair(m: &Nfa, k: usize, x: &crate::Word, y: &crate::Word) -> (crate::Word, crate::Word) {
    let round: crate::Word = m.alphabet().iter().cloned().collect();
    let prefix = round.repeat(k);
    (prefix.concat(x), prefix.concat(y))
}
