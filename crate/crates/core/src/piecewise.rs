//! Piecewise testability.
//!
//! `sub_k(w)` is the set of subwords (scattered subsequences) of `w` of length at most
//! `k`, and `u ∼_k v` iff `sub_k(u) = sub_k(v)`. A language is k-PT when it is a union of
//! `∼_k` classes, and PT when it is k-PT for some `k`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;

use crate::automaton::{Nfa, Symbol, Word};
use crate::classify::{is_confluent, is_partially_ordered, is_ums};
use crate::deciders::{unary_eventual_behavior, Budget};
use crate::error::{Error, Result};

/// `sub_k(w)` as a length-lexicographically sorted list of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubwordSet {
    k: usize,
    words: Vec<Word>,
}

impl SubwordSet {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search_by(|x| x.length_lex_cmp(w)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    fn from_set(k: usize, set: BTreeSet<Vec<Symbol>>) -> Self {
        let mut words: Vec<Word> = set.into_iter().map(Word::new).collect();
        words.sort_by(|a, b| a.length_lex_cmp(b));
        SubwordSet { k, words }
    }
}

pub fn subwords_k(w: &Word, k: usize) -> SubwordSet {
    let mut set: BTreeSet<Vec<Symbol>> = BTreeSet::from([Vec::new()]);
    for s in w.symbols() {
        let grown: Vec<Vec<Symbol>> = set
            .iter()
            .filter(|u| u.len() < k)
            .map(|u| {
                let mut u = u.clone();
                u.push(s.clone());
                u
            })
            .collect();
        set.extend(grown);
    }
    SubwordSet::from_set(k, set)
}

pub fn sim_k(u: &Word, v: &Word, k: usize) -> bool {
    subwords_k(u, k) == subwords_k(v, k)
}

/// Two `∼_k`-equivalent words of which exactly one is in the language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KptWitness {
    k: usize,
    u: Word,
    v: Word,
}

impl KptWitness {
    /// Checks `u ∼_k v` and that `a` accepts exactly one of them.
    pub fn new(a: &Nfa, u: Word, v: Word, k: usize) -> Result<Self> {
        if !sim_k(&u, &v, k) {
            return Err(Error::InvalidParameter(format!("`{u}` and `{v}` are not {k}-equivalent")));
        }
        if a.accepts(&u)? == a.accepts(&v)? {
            return Err(Error::InvalidParameter(format!("`{u}` and `{v}` are both accepted or both rejected")));
        }
        Ok(KptWitness { k, u, v })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn u(&self) -> &Word {
        &self.u
    }

    pub fn v(&self) -> &Word {
        &self.v
    }
}

const NONE: usize = usize::MAX;

/// Deterministic automaton on `∼_k` classes: a state is `sub_k(w)` for the words `w` read so
/// far, reading `a` maps `S` to `S ∪ {ua | u ∈ S, |u| < k}`.
///
/// Subword sets are bitsets over an enumeration of all words of length at most `k`.
/// States are discovered lazily.
#[derive(Clone, Debug)]
pub struct KAbstraction {
    k: usize,
    sigma: usize,
    words: Vec<Vec<usize>>,
    ext: Vec<Vec<usize>>,
    short: Vec<usize>,
    states: Vec<Vec<u64>>,
    index: HashMap<Vec<u64>, usize>,
    trans: Vec<Vec<usize>>,
}

impl KAbstraction {
    /// Fails with a budget error when there are more than `max_words` words of length `<= k`.
    pub fn new(sigma: usize, k: usize, max_words: usize) -> Result<Self> {
        let mut total: usize = 1;
        let mut layer: usize = 1;
        for _ in 0..k {
            layer = layer.checked_mul(sigma).ok_or(Error::BudgetExceeded(max_words))?;
            total = total.checked_add(layer).ok_or(Error::BudgetExceeded(max_words))?;
            if total > max_words {
                return Err(Error::BudgetExceeded(max_words));
            }
            if layer == 0 {
                break;
            }
        }
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut ext: Vec<Vec<usize>> = Vec::new();
        let mut short = Vec::new();
        let mut i = 0;
        while i < words.len() {
            if words[i].len() < k {
                short.push(i);
                let mut row = Vec::with_capacity(sigma);
                for a in 0..sigma {
                    let mut w = words[i].clone();
                    w.push(a);
                    row.push(words.len());
                    words.push(w);
                }
                ext.push(row);
            } else {
                ext.push(vec![NONE; sigma]);
            }
            i += 1;
        }
        let mut initial = vec![0u64; words.len().div_ceil(64)];
        initial[0] = 1;
        let mut abs = KAbstraction {
            k,
            sigma,
            words,
            ext,
            short,
            states: Vec::new(),
            index: HashMap::new(),
            trans: Vec::new(),
        };
        abs.intern(initial);
        Ok(abs)
    }

    fn intern(&mut self, bits: Vec<u64>) -> usize {
        if let Some(&i) = self.index.get(&bits) {
            return i;
        }
        let i = self.states.len();
        self.index.insert(bits.clone(), i);
        self.states.push(bits);
        self.trans.push(vec![NONE; self.sigma]);
        i
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet_size(&self) -> usize {
        self.sigma
    }

    /// The class of the empty word, `{ε}`.
    pub fn initial(&self) -> usize {
        0
    }

    /// Number of states discovered so far.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn step(&mut self, s: usize, a: usize) -> usize {
        if self.trans[s][a] != NONE {
            return self.trans[s][a];
        }
        let old = &self.states[s];
        let mut bits = old.clone();
        for &u in &self.short {
            if old[u / 64] >> (u % 64) & 1 == 1 {
                let t = self.ext[u][a];
                bits[t / 64] |= 1 << (t % 64);
            }
        }
        let t = self.intern(bits);
        self.trans[s][a] = t;
        t
    }

    pub fn run(&mut self, w: &[usize]) -> usize {
        w.iter().fold(self.initial(), |s, &a| self.step(s, a))
    }

    /// Discovers all reachable states; fails once more than `limit` exist.
    pub fn explore_all(&mut self, limit: usize) -> Result<usize> {
        let mut i = 0;
        while i < self.states.len() {
            for a in 0..self.sigma {
                self.step(i, a);
                if self.states.len() > limit {
                    return Err(Error::BudgetExceeded(limit));
                }
            }
            i += 1;
        }
        Ok(self.states.len())
    }

    /// The subword set of state `s`, spelled over `alphabet`.
    pub fn subword_set(&self, s: usize, alphabet: &[Symbol]) -> SubwordSet {
        let bits = &self.states[s];
        let set = (0..self.words.len())
            .filter(|&u| bits[u / 64] >> (u % 64) & 1 == 1)
            .map(|u| self.words[u].iter().map(|&a| alphabet[a].clone()).collect())
            .collect();
        SubwordSet::from_set(self.k, set)
    }
}

/// Result of the PT test together with the minimal DFA it was computed on.
#[derive(Clone, Debug)]
pub struct PtDecision {
    pub holds: bool,
    pub minimal_dfa: Nfa,
    pub partially_ordered: bool,
    pub ums: Option<bool>,
    pub confluent: bool,
}

/// Minimal DFA of `a` (via subset construction under `budget`).
pub fn minimal_dfa(a: &Nfa, budget: &Budget) -> Result<Nfa> {
    a.subset_construction(Some(budget.max_macrostates))?.0.minimize()
}

/// `L(a)` is PT iff its minimal DFA is partially ordered and has the UMS property.
/// Confluence is evaluated too and must agree with UMS.
pub fn is_pt(a: &Nfa, budget: &Budget) -> Result<PtDecision> {
    let d = minimal_dfa(a, budget)?;
    let po = is_partially_ordered(&d);
    let confluent = is_confluent(&d);
    let ums = if po { Some(is_ums(&d)?) } else { None };
    if let Some(u) = ums {
        assert_eq!(u, confluent, "UMS and confluence disagree on a partially ordered DFA");
    }
    Ok(PtDecision { holds: po && ums == Some(true), minimal_dfa: d, partially_ordered: po, ums, confluent })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KptDecision {
    pub holds: bool,
    pub witness: Option<KptWitness>,
}

/// Explores pairs (subword class, minimal DFA state). `L(a)` is k-PT iff no class meets
/// both an accepting and a rejecting DFA state. Witness words are the breadth-first words
/// reaching the two conflicting pairs.
pub fn is_kpt(a: &Nfa, k: usize, budget: &Budget) -> Result<KptDecision> {
    let d = minimal_dfa(a, budget)?;
    let mut abs = KAbstraction::new(d.num_symbols(), k, budget.max_macrostates)?;
    let mut nodes: Vec<(usize, usize)> = vec![(abs.initial(), d.initial()[0])];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([(nodes[0], 0)]);
    let mut first: HashMap<usize, [Option<usize>; 2]> = HashMap::new();
    first.entry(nodes[0].0).or_default()[usize::from(d.is_accepting(nodes[0].1))] = Some(0);

    let word_of = |parent: &[Option<(usize, usize)>], mut i: usize| {
        let mut w = Vec::new();
        while let Some((p, c)) = parent[i] {
            w.push(c);
            i = p;
        }
        w.reverse();
        d.decode(&w)
    };

    let mut i = 0;
    while i < nodes.len() {
        let (s, q) = nodes[i];
        for c in 0..d.num_symbols() {
            let node = (abs.step(s, c), d.succ(q, c)[0]);
            if index.contains_key(&node) {
                continue;
            }
            if nodes.len() >= budget.max_macrostates {
                return Err(Error::BudgetExceeded(budget.max_macrostates));
            }
            let j = nodes.len();
            index.insert(node, j);
            nodes.push(node);
            parent.push(Some((i, c)));
            let acc = usize::from(d.is_accepting(node.1));
            let slot = first.entry(node.0).or_default();
            if let Some(other) = slot[1 - acc] {
                let u = word_of(&parent, other);
                let v = word_of(&parent, j);
                let witness = KptWitness::new(a, u, v, k).expect("conflicting pair is a witness");
                return Ok(KptDecision { holds: false, witness: Some(witness) });
            }
            slot[acc].get_or_insert(j);
        }
        i += 1;
    }
    Ok(KptDecision { holds: true, witness: None })
}

/// Least `k` with `L(a)` k-PT, or `None` when `L(a)` is not PT. The search stops at the
/// depth of the minimal DFA, which bounds `k` for PT languages.
pub fn min_k(a: &Nfa, budget: &Budget) -> Result<Option<usize>> {
    let pt = is_pt(a, budget)?;
    if !pt.holds {
        return Ok(None);
    }
    let bound = pt.minimal_dfa.depth()?;
    for k in 0..=bound {
        if is_kpt(&pt.minimal_dfa, k, budget)?.holds {
            return Ok(Some(k));
        }
    }
    panic!("PT language is not {bound}-PT although {bound} is the depth of its minimal DFA");
}

fn require_unary(a: &Nfa) -> Result<()> {
    if a.num_symbols() != 1 {
        return Err(Error::NotUnary);
    }
    Ok(())
}

/// Unary DFA with `n` states: k-PT iff `a^k, ..., a^(k+n)` are all accepted or all rejected.
pub fn unary_kpt_dfa(d: &Nfa, k: usize) -> Result<bool> {
    require_unary(d)?;
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    // Walk the lasso once, then index positions past it modulo the cycle.
    let mut seq = vec![d.initial()[0]];
    let mut pos = vec![usize::MAX; d.num_states()];
    pos[seq[0]] = 0;
    let (pre, per) = loop {
        let next = d.succ(*seq.last().expect("nonempty"), 0)[0];
        if pos[next] != usize::MAX {
            break (pos[next], seq.len() - pos[next]);
        }
        pos[next] = seq.len();
        seq.push(next);
    };
    let at = |j: usize| if j < seq.len() { seq[j] } else { seq[pre + (j - pre) % per] };
    let n = d.num_states();
    let first = d.is_accepting(at(k));
    Ok((k..=k + n).all(|j| d.is_accepting(at(j)) == first))
}

/// Unary poNFA: the macro-states `δ(I, a^j)` are constant from `j = n` on. With `d` the
/// least index from which acceptance is constant, the language is k-PT iff `a^k` and
/// `a^l` agree for every `k < l <= d`.
pub fn unary_kpt_ponfa(a: &Nfa, k: usize) -> Result<bool> {
    require_unary(a)?;
    if !is_partially_ordered(a) {
        return Err(Error::NotPartiallyOrdered);
    }
    let n = a.num_states();
    let mut acc = Vec::with_capacity(n + 1);
    let mut cur = a.initial().to_vec();
    for _ in 0..=n {
        acc.push(cur.iter().any(|&q| a.is_accepting(q)));
        cur = a.step(&cur, 0);
    }
    let tail = acc[n];
    let d = (0..=n).rev().take_while(|&j| acc[j] == tail).last().unwrap_or(n);
    let at = |j: usize| acc[j.min(n)];
    Ok(k >= d || (k + 1..=d).all(|l| at(k) == at(l)))
}

/// Unary NFA: PT iff acceptance is constant on the periodic part, and then k-PT iff it
/// is also constant on `[k, preperiod)`.
pub fn unary_kpt_nfa(a: &Nfa, k: &BigUint, budget: &Budget) -> Result<bool> {
    let e = unary_eventual_behavior(a, budget)?;
    let Some(value) = e.eventual_value() else {
        return Ok(false);
    };
    if *k >= BigUint::from(e.preperiod) {
        return Ok(true);
    }
    let k: usize = k.try_into().expect("below preperiod");
    Ok(e.acceptance[k..e.preperiod].iter().all(|&b| b == value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn nfa(json: &str) -> Nfa {
        Nfa::from_json(json).unwrap()
    }

    #[test]
    fn subword_examples() {
        let s = subwords_k(&w("a b a"), 2);
        let expected: Vec<Word> = ["", "a", "b", "a a", "a b", "b a"].iter().map(|x| w(x)).collect();
        assert_eq!(s.words(), &expected[..]);
        assert!(sim_k(&w("a b"), &w("a b b"), 1));
        assert!(!sim_k(&w("a b"), &w("b a"), 2));
        assert_eq!(subwords_k(&w(""), 3).len(), 1);
    }

    #[test]
    fn abstraction_matches_subwords() {
        let alphabet = vec![Symbol::new("a").unwrap(), Symbol::new("b").unwrap()];
        let mut abs = KAbstraction::new(2, 2, 1 << 10).unwrap();
        let s = abs.run(&[0, 1, 0]);
        assert_eq!(abs.subword_set(s, &alphabet), subwords_k(&w("a b a"), 2));
        assert_eq!(abs.subword_set(abs.initial(), &alphabet).words(), &[Word::empty()]);
    }

    #[test]
    fn abstraction_respects_word_budget() {
        assert!(matches!(KAbstraction::new(4, 10, 1000), Err(Error::BudgetExceeded(1000))));
    }

    #[test]
    fn kpt_for_sigma_k_sigma_star() {
        // a^3 a*
        let a = nfa(r#"{"alphabet":["a","b"],"states":["0","1","2","3"],"initial":["0"],"accepting":["3"],
            "transitions":[["0","a","1"],["0","b","1"],["1","a","2"],["1","b","2"],["2","a","3"],["2","b","3"],
            ["3","a","3"],["3","b","3"]]}"#);
        let b = Budget::default();
        assert!(is_kpt(&a, 3, &b).unwrap().holds);
        let d = is_kpt(&a, 2, &b).unwrap();
        assert!(!d.holds);
        let wit = d.witness.unwrap();
        assert!(sim_k(wit.u(), wit.v(), 2));
        assert_ne!(a.accepts(wit.u()).unwrap(), a.accepts(wit.v()).unwrap());
        assert!(is_pt(&a, &b).unwrap().holds);
        assert_eq!(min_k(&a, &b).unwrap(), Some(3));
    }

    #[test]
    fn witness_constructor_validates() {
        let a = nfa(r#"{"alphabet":["a"],"states":["e","o"],"initial":["e"],"accepting":["e"],
            "transitions":[["e","a","o"],["o","a","e"]]}"#);
        assert!(KptWitness::new(&a, w("a"), w("a a"), 1).is_ok());
        assert!(KptWitness::new(&a, w("a"), w("a a a"), 1).is_err());
        assert!(KptWitness::new(&a, w(""), w("a a"), 1).is_err());
        assert!(!is_pt(&a, &Budget::default()).unwrap().holds);
        assert_eq!(min_k(&a, &Budget::default()).unwrap(), None);
    }

    #[test]
    fn unary_deciders_on_a_geq_two() {
        let d = nfa(r#"{"alphabet":["a"],"states":["0","1","2"],"initial":["0"],"accepting":["2"],
            "transitions":[["0","a","1"],["1","a","2"],["2","a","2"]]}"#);
        for k in 0..5usize {
            let expected = k >= 2;
            assert_eq!(unary_kpt_dfa(&d, k).unwrap(), expected, "{k}");
            assert_eq!(unary_kpt_ponfa(&d, k).unwrap(), expected, "{k}");
            assert_eq!(unary_kpt_nfa(&d, &BigUint::from(k), &Budget::default()).unwrap(), expected, "{k}");
        }
        let two = nfa(r#"{"alphabet":["a","b"],"states":["0"],"initial":["0"],"accepting":[],"transitions":[]}"#);
        assert!(matches!(unary_kpt_dfa(&two, 1), Err(Error::NotUnary)));
    }
}
