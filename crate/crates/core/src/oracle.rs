//! Brute-force reference checks by exhaustive enumeration of short words.
//!
//! Nothing here shares code with the deciders except membership (`Nfa::accepts_indices`).
//! Words are enumerated in length-lexicographic order following the alphabet order.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{pad_alphabets, same_alphabet, Nfa, Symbol, Word};
use crate::error::{Error, Result};
use crate::piecewise::KptWitness;

/// All words over `sigma` symbol indices of length `<= max_len`, shortest first.
pub fn words_up_to(sigma: usize, max_len: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = Some(Vec::new());
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        // Odometer increment; roll over into the next length.
        let mut i = next.len();
        loop {
            if i == 0 {
                if next.len() < max_len && sigma > 0 {
                    next = vec![0; out.len() + 1];
                    cur = Some(next);
                }
                break;
            }
            i -= 1;
            if next[i] + 1 < sigma {
                next[i] += 1;
                for x in &mut next[i + 1..] {
                    *x = 0;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Accepted words of length `<= max_len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageSample {
    pub max_len: usize,
    pub alphabet: Vec<Symbol>,
    pub accepted: Vec<Word>,
}

pub fn sample(a: &Nfa, max_len: usize) -> LanguageSample {
    LanguageSample {
        max_len,
        alphabet: a.alphabet().to_vec(),
        accepted: words_up_to(a.num_symbols(), max_len)
            .filter(|w| a.accepts_indices(w))
            .map(|w| a.decode(&w))
            .collect(),
    }
}

/// First rejected word of length `<= max_len`, if any.
pub fn oracle_universal(a: &Nfa, max_len: usize) -> Option<Word> {
    words_up_to(a.num_symbols(), max_len).find(|w| !a.accepts_indices(w)).map(|w| a.decode(&w))
}

/// First word of length `<= max_len` on which the two automata differ. Letters missing from
/// one alphabet are added there without transitions.
pub fn oracle_equivalent(a: &Nfa, b: &Nfa, max_len: usize) -> Result<Option<Word>> {
    let (a, b) = pad_alphabets(a, b);
    if !same_alphabet(&a, &b) {
        return Err(Error::AlphabetMismatch);
    }
    let map: Vec<usize> = a.alphabet().iter().map(|s| b.symbol_id(s).expect("same alphabet")).collect();
    Ok(words_up_to(a.num_symbols(), max_len)
        .find(|w| {
            let wb: Vec<usize> = w.iter().map(|&c| map[c]).collect();
            a.accepts_indices(w) != b.accepts_indices(&wb)
        })
        .map(|w| a.decode(&w)))
}

/// Subwords of length `<= k`, by trying every subset of positions.
pub fn brute_subwords(w: &[usize], k: usize) -> BTreeSet<Vec<usize>> {
    assert!(w.len() < 64, "word too long for subset enumeration");
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << w.len()) {
        if mask.count_ones() as usize <= k {
            out.insert((0..w.len()).filter(|&i| mask >> i & 1 == 1).map(|i| w[i]).collect());
        }
    }
    out
}

/// First pair (in enumeration order) of `∼_k`-equivalent words of length `<= max_len`
/// that the automaton separates.
pub fn oracle_kpt(a: &Nfa, k: usize, max_len: usize) -> Option<KptWitness> {
    let mut classes: HashMap<BTreeSet<Vec<usize>>, [Option<Vec<usize>>; 2]> = HashMap::new();
    for w in words_up_to(a.num_symbols(), max_len) {
        let acc = usize::from(a.accepts_indices(&w));
        let slot = classes.entry(brute_subwords(&w, k)).or_default();
        if let Some(other) = &slot[1 - acc] {
            let witness = KptWitness::new(a, a.decode(other), a.decode(&w), k);
            return Some(witness.expect("separated equivalent words"));
        }
        slot[acc].get_or_insert(w);
    }
    None
}
