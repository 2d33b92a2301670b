//! Automata over `{0, 1}` built from DNF formulas.
//!
//! For a conjunct `η_i`, the pattern `β_i = β_{i,1} ... β_{i,n}` has `β_{i,j} = 1` for `x_j`,
//! `0` for `¬x_j`, and `0+1` if `x_j` does not occur; `L(β_i)` is the set of satisfying
//! assignments of `η_i` written as words of length `n`.

use crate::automaton::{Nfa, NfaBuilder, Symbol};
use crate::constructions::formula::DnfFormula;
use crate::error::Result;

fn binary() -> Vec<Symbol> {
    vec![Symbol::new("0").expect("symbol"), Symbol::new("1").expect("symbol")]
}

/// Letters allowed by a pattern position.
fn letters(p: Option<bool>) -> &'static [usize] {
    match p {
        Some(false) => &[0],
        Some(true) => &[1],
        None => &[0, 1],
    }
}

/// ptNFA for `L(β) ∪ {w : |w| ≠ n}`, universal iff the formula is valid.
pub fn dnf_to_ptnfa(phi: &DnfFormula) -> Result<Nfa> {
    phi.validate()?;
    let n = phi.vars;
    let mut b = NfaBuilder::with_alphabet(&binary());
    b.set_name("dnf-ptnfa");
    let zero = b.add_state("0")?;
    b.set_initial(zero);
    b.set_accepting(zero);
    for i in 0..phi.conjuncts.len() {
        let mut prev = zero;
        for (l, p) in phi.pattern(i).into_iter().enumerate() {
            let cur = b.add_state(format!("q_{}_{}", i + 1, l + 1))?;
            for &c in letters(p) {
                b.add_transition(prev, c, cur);
            }
            prev = cur;
        }
        b.set_accepting(prev);
    }
    let alpha: Vec<usize> = (1..=n + 1).map(|l| b.add_state(format!("alpha_{l}"))).collect::<Result<_>>()?;
    let mut prev = zero;
    for &a in &alpha {
        b.add_transition(prev, 0, a);
        b.add_transition(prev, 1, a);
        prev = a;
    }
    b.add_transition(alpha[n], 0, alpha[n]);
    b.add_transition(alpha[n], 1, alpha[n]);
    for (l, &a) in alpha.iter().enumerate() {
        if l + 1 != n {
            b.set_accepting(a);
        }
    }
    let r: Vec<usize> = (1..=n).map(|l| b.add_state(format!("r_{l}"))).collect::<Result<_>>()?;
    for l in 0..n {
        let next = if l + 1 < n { r[l + 1] } else { alpha[n] };
        b.add_transition(r[l], 0, next);
        b.add_transition(r[l], 1, next);
    }
    for q in 0..b.num_states() {
        for c in 0..2 {
            if !b.has_transition(q, c) {
                b.add_transition(q, c, r[0]);
            }
        }
    }
    Ok(b.build())
}

/// One complete poDFA per conjunct, for `{0,1}* \ L(β_i)`. The formula is valid iff the
/// intersection of their languages contains no word of length `n`.
pub fn dnf_to_podfa_family(phi: &DnfFormula) -> Result<Vec<Nfa>> {
    phi.validate()?;
    (0..phi.conjuncts.len())
        .map(|i| {
            let mut b = NfaBuilder::with_alphabet(&binary());
            b.set_name(format!("conjunct-{}", i + 1));
            let path: Vec<usize> = (0..=phi.vars).map(|l| b.add_state(format!("p_{l}"))).collect::<Result<_>>()?;
            let sink = b.add_state("sink")?;
            for (l, p) in phi.pattern(i).into_iter().enumerate() {
                for &c in letters(p) {
                    b.add_transition(path[l], c, path[l + 1]);
                }
            }
            for q in 0..b.num_states() {
                for c in 0..2 {
                    if !b.has_transition(q, c) {
                        b.add_transition(q, c, sink);
                    }
                }
            }
            b.set_initial(path[0]);
            for q in 0..b.num_states() {
                if q != path[phi.vars] {
                    b.set_accepting(q);
                }
            }
            Ok(b.build())
        })
        .collect()
}

/// rpoNFA for `L(β){0,1}* ∪ {w : |w| < n}`: PT iff the formula is valid. Not complete.
pub fn dnf_to_rponfa(phi: &DnfFormula) -> Result<Nfa> {
    phi.validate()?;
    let n = phi.vars;
    let mut b = NfaBuilder::with_alphabet(&binary());
    b.set_name("dnf-rponfa");
    for i in 0..phi.conjuncts.len() {
        let mut prev = b.add_state(format!("q_{}_0", i + 1))?;
        b.set_initial(prev);
        for (l, p) in phi.pattern(i).into_iter().enumerate() {
            let cur = b.add_state(format!("q_{}_{}", i + 1, l + 1))?;
            for &c in letters(p) {
                b.add_transition(prev, c, cur);
            }
            prev = cur;
        }
        b.add_transition(prev, 0, prev);
        b.add_transition(prev, 1, prev);
        b.set_accepting(prev);
    }
    let alpha: Vec<usize> = (1..=n).map(|l| b.add_state(format!("alpha_{l}"))).collect::<Result<_>>()?;
    b.set_initial(alpha[0]);
    for w in alpha.windows(2) {
        b.add_transition(w[0], 0, w[1]);
        b.add_transition(w[0], 1, w[1]);
    }
    for &a in &alpha {
        b.set_accepting(a);
    }
    Ok(b.build())
}
