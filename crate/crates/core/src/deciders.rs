//! Universality, inclusion and equivalence by on-the-fly subset exploration, plus unary
//! helpers based on Boolean matrix powers.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::automaton::{pad_alphabets, MacroState, Nfa, Word};
use crate::error::{Error, Result};

/// Upper bound on the number of macro-states (or product nodes) a decider may create.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_macrostates: usize,
}

impl Budget {
    pub const DEFAULT_MAX: usize = 1 << 20;

    pub fn new(max_macrostates: usize) -> Self {
        Budget { max_macrostates }
    }

    fn check(&self, count: usize) -> Result<()> {
        if count > self.max_macrostates {
            return Err(Error::BudgetExceeded(self.max_macrostates));
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_macrostates: Self::DEFAULT_MAX }
    }
}

/// Outcome of a decision problem. A witness is present exactly when the property fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub holds: bool,
    pub witness: Option<Word>,
}

impl Decision {
    pub fn holds() -> Self {
        Decision { holds: true, witness: None }
    }

    pub fn fails(witness: Word) -> Self {
        Decision { holds: false, witness: Some(witness) }
    }
}

fn path_to(parent: &[Option<(usize, usize)>], mut node: usize) -> Vec<usize> {
    let mut w = Vec::new();
    while let Some((p, a)) = parent[node] {
        w.push(a);
        node = p;
    }
    w.reverse();
    w
}

/// `L(a) = Σ*`. The witness is the length-lexicographically least rejected word.
pub fn universal(a: &Nfa, budget: &Budget) -> Result<Decision> {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sets = vec![a.initial().to_vec()];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    index.insert(sets[0].clone(), 0);
    let mut i = 0;
    while i < sets.len() {
        if !sets[i].iter().any(|&q| a.is_accepting(q)) {
            return Ok(Decision::fails(a.decode(&path_to(&parent, i))));
        }
        for c in 0..a.num_symbols() {
            let t = a.step(&sets[i], c);
            if !index.contains_key(&t) {
                budget.check(sets.len() + 1)?;
                index.insert(t.clone(), sets.len());
                sets.push(t);
                parent.push(Some((i, c)));
            }
        }
        i += 1;
    }
    Ok(Decision::holds())
}

/// `L(a) ⊆ L(b)` over the union of both alphabets. The witness is a shortest word in
/// `L(a) \ L(b)`.
pub fn includes(a: &Nfa, b: &Nfa, budget: &Budget) -> Result<Decision> {
    let (a, b) = pad_alphabets(a, b);
    includes_same_alphabet(&a, &b, budget)
}

fn includes_same_alphabet(a: &Nfa, b: &Nfa, budget: &Budget) -> Result<Decision> {
    let map: Vec<usize> = a.alphabet().iter().map(|s| b.symbol_id(s).expect("padded")).collect();
    let mut set_index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut intern = |s: Vec<usize>, sets: &mut Vec<Vec<usize>>| -> usize {
        *set_index.entry(s.clone()).or_insert_with(|| {
            sets.push(s);
            sets.len() - 1
        })
    };
    let start = intern(b.initial().to_vec(), &mut sets);
    let mut node_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut parent: Vec<Option<(usize, usize)>> = Vec::new();
    for &p in a.initial() {
        node_index.insert((p, start), nodes.len());
        nodes.push((p, start));
        parent.push(None);
    }
    let mut i = 0;
    while i < nodes.len() {
        let (p, s) = nodes[i];
        if a.is_accepting(p) && !sets[s].iter().any(|&q| b.is_accepting(q)) {
            return Ok(Decision::fails(a.decode(&path_to(&parent, i))));
        }
        for (c, &cb) in map.iter().enumerate() {
            if a.succ(p, c).is_empty() {
                continue;
            }
            let t = b.step(&sets[s], cb);
            let t = intern(t, &mut sets);
            for &p2 in a.succ(p, c) {
                if let Entry::Vacant(slot) = node_index.entry((p2, t)) {
                    budget.check(nodes.len() + 1)?;
                    slot.insert(nodes.len());
                    nodes.push((p2, t));
                    parent.push(Some((i, c)));
                }
            }
        }
        i += 1;
    }
    Ok(Decision::holds())
}

/// `L(a) = L(b)`. The witness is the shorter of the two inclusion counterexamples.
pub fn equivalent(a: &Nfa, b: &Nfa, budget: &Budget) -> Result<Decision> {
    let (a, b) = pad_alphabets(a, b);
    let ab = includes_same_alphabet(&a, &b, budget)?;
    let ba = includes_same_alphabet(&b, &a, budget)?;
    Ok(match (ab.witness, ba.witness) {
        (None, None) => Decision::holds(),
        (Some(u), None) => Decision::fails(u),
        (None, Some(v)) => Decision::fails(v),
        (Some(u), Some(v)) => Decision::fails(if v.len() < u.len() { v } else { u }),
    })
}

/// Square Boolean matrix with bit-packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl BoolMatrix {
    pub fn zeros(n: usize) -> Self {
        BoolMatrix { n, rows: vec![vec![0; n.div_ceil(64)]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Transition matrix of one symbol: entry `(p, q)` is set iff `q ∈ δ(p, a)`.
    pub fn of_symbol(a: &Nfa, sym: usize) -> Self {
        let mut m = Self::zeros(a.num_states());
        for p in 0..a.num_states() {
            for &q in a.succ(p, sym) {
                m.set(p, q, true);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i][j / 64] |= 1 << (j % 64);
        } else {
            self.rows[i][j / 64] &= !(1 << (j % 64));
        }
    }

    pub fn multiply(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.n, other.n);
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    for (o, r) in out.rows[i].iter_mut().zip(&other.rows[k]) {
                        *o |= r;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix: the image of a state set.
    pub fn image(&self, set: &[usize]) -> Vec<usize> {
        let mut acc = vec![0u64; self.n.div_ceil(64)];
        for &i in set {
            for (o, r) in acc.iter_mut().zip(&self.rows[i]) {
                *o |= r;
            }
        }
        (0..self.n).filter(|&j| acc[j / 64] >> (j % 64) & 1 == 1).collect()
    }
}

fn require_unary(a: &Nfa) -> Result<()> {
    if a.num_symbols() != 1 {
        return Err(Error::NotUnary);
    }
    Ok(())
}

/// `δ(I, a^k)` for a unary automaton, by square-and-multiply on the transition matrix.
pub fn unary_power_image(a: &Nfa, k: &BigUint) -> Result<MacroState> {
    require_unary(a)?;
    let mut set = a.initial().to_vec();
    let mut m = BoolMatrix::of_symbol(a, 0);
    let bits = k.bits();
    for i in 0..bits {
        if k.bit(i) {
            set = m.image(&set);
        }
        if i + 1 < bits {
            m = m.multiply(&m);
        }
    }
    Ok(MacroState::new(set))
}

/// Ultimately periodic acceptance of a unary automaton: `a^j` is accepted iff
/// `acceptance[j]` for `j < preperiod + period`, and the pattern repeats with `period`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualBehavior {
    pub preperiod: usize,
    pub period: usize,
    pub acceptance: Vec<bool>,
}

impl EventualBehavior {
    fn index_of(&self, j: &BigUint) -> usize {
        let pre = BigUint::from(self.preperiod);
        if *j < pre {
            return j.to_usize().expect("below preperiod");
        }
        let off = (j - &pre) % BigUint::from(self.period);
        self.preperiod + off.to_usize().expect("below period")
    }

    pub fn accepts_power(&self, j: &BigUint) -> bool {
        self.acceptance[self.index_of(j)]
    }

    /// Acceptance value on the periodic part, if constant there.
    pub fn eventual_value(&self) -> Option<bool> {
        let cycle = &self.acceptance[self.preperiod..];
        cycle.iter().all(|&b| b == cycle[0]).then_some(cycle[0])
    }
}

/// Iterates `δ(I, a^j)` until a macro-state repeats.
pub fn unary_eventual_behavior(a: &Nfa, budget: &Budget) -> Result<EventualBehavior> {
    require_unary(a)?;
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut acceptance = Vec::new();
    let mut cur = a.initial().to_vec();
    loop {
        if let Some(&first) = seen.get(&cur) {
            return Ok(EventualBehavior { preperiod: first, period: acceptance.len() - first, acceptance });
        }
        budget.check(seen.len() + 1)?;
        seen.insert(cur.clone(), acceptance.len());
        acceptance.push(cur.iter().any(|&q| a.is_accepting(q)));
        cur = a.step(&cur, 0);
    }
}

/// A shortest word of length `<= bound` accepted by every automaton, found by breadth-first
/// search over tuples of macro-states. Alphabets must be equal as sets.
pub fn intersection_word_within(automata: &[Nfa], bound: usize) -> Result<Option<Word>> {
    let Some(first) = automata.first() else {
        return Ok(Some(Word::empty()));
    };
    let alphabet = first.alphabet().to_vec();
    let padded: Vec<Nfa> = automata
        .iter()
        .map(|a| {
            if a.num_symbols() != alphabet.len() || a.alphabet().iter().any(|s| first.symbol_id(s).is_none()) {
                return Err(Error::AlphabetMismatch);
            }
            a.with_alphabet(&alphabet)
        })
        .collect::<Result<_>>()?;
    let start: Vec<Vec<usize>> = padded.iter().map(|a| a.initial().to_vec()).collect();
    let mut seen: std::collections::HashSet<Vec<Vec<usize>>> = std::collections::HashSet::from([start.clone()]);
    let mut queue: VecDeque<(Vec<Vec<usize>>, Vec<usize>)> = VecDeque::from([(start, Vec::new())]);
    while let Some((sets, w)) = queue.pop_front() {
        if sets.iter().zip(&padded).all(|(s, a)| s.iter().any(|&q| a.is_accepting(q))) {
            return Ok(Some(first.decode(&w)));
        }
        if w.len() == bound || sets.iter().any(Vec::is_empty) {
            continue;
        }
        for c in 0..alphabet.len() {
            let next: Vec<Vec<usize>> = sets.iter().zip(&padded).map(|(s, a)| a.step(s, c)).collect();
            if seen.insert(next.clone()) {
                let mut w2 = w.clone();
                w2.push(c);
                queue.push_back((next, w2));
            }
        }
    }
    Ok(None)
}
