//! Nondeterministic finite automata over named states and symbols.
//!
//! States and symbols are stored by index; names are kept for I/O. The transition
//! relation is a table `delta[state][symbol]` of sorted target lists.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph;

/// An alphabet letter. Names are non-empty and contain no whitespace or quotes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '"') {
            return Err(Error::InvalidAutomaton(format!("bad symbol name {name:?}")));
        }
        Ok(Symbol(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Symbol {
    type Error = Error;
    fn try_from(value: String) -> Result<Self> {
        Symbol::new(value)
    }
}

impl From<Symbol> for String {
    fn from(s: Symbol) -> String {
        s.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite sequence of symbols. Displayed as space-separated symbol names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses whitespace-separated symbol names. The empty string is the empty word.
    pub fn parse(text: &str) -> Result<Self> {
        text.split_whitespace().map(Symbol::new).collect::<Result<Vec<_>>>().map(Word)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(std::iter::repeat_n(self.0.iter().cloned(), times).flatten().collect())
    }

    /// Shorter words first, then lexicographic by symbol name.
    pub fn length_lex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(s.as_str())?;
        }
        Ok(())
    }
}

/// A set of states of one automaton, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MacroState(Vec<usize>);

impl MacroState {
    pub fn new(states: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = states.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        MacroState(v)
    }

    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        MacroState(v)
    }

    pub fn states(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<usize> for MacroState {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        MacroState::new(iter)
    }
}

/// A nondeterministic finite automaton `(Q, Σ, δ, I, F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NfaFile", into = "NfaFile")]
pub struct Nfa {
    name: Option<String>,
    states: Vec<String>,
    alphabet: Vec<Symbol>,
    delta: Vec<Vec<Vec<usize>>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    state_index: HashMap<String, usize>,
    symbol_index: HashMap<Symbol, usize>,
}

/// Incremental construction by index. Duplicate transitions are merged.
#[derive(Clone, Debug, Default)]
pub struct NfaBuilder {
    name: Option<String>,
    states: Vec<String>,
    state_index: HashMap<String, usize>,
    alphabet: Vec<Symbol>,
    symbol_index: HashMap<Symbol, usize>,
    transitions: BTreeSet<(usize, usize, usize)>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
}

impl NfaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_alphabet(alphabet: &[Symbol]) -> Self {
        let mut b = Self::new();
        for s in alphabet {
            b.add_symbol(s.clone());
        }
        b
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    /// Adds a symbol if absent and returns its index.
    pub fn add_symbol(&mut self, s: Symbol) -> usize {
        if let Some(&i) = self.symbol_index.get(&s) {
            return i;
        }
        let i = self.alphabet.len();
        self.symbol_index.insert(s.clone(), i);
        self.alphabet.push(s);
        i
    }

    pub fn symbol_id(&self, s: &Symbol) -> Option<usize> {
        self.symbol_index.get(s).copied()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    /// Adds a fresh state; fails if the name is taken.
    pub fn add_state(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.state_index.contains_key(&name) {
            return Err(Error::InvalidAutomaton(format!("duplicate state {name:?}")));
        }
        let i = self.states.len();
        self.state_index.insert(name.clone(), i);
        self.states.push(name);
        Ok(i)
    }

    /// Returns the state with this name, creating it if needed.
    pub fn state(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        if let Some(&i) = self.state_index.get(&name) {
            return i;
        }
        self.add_state(name).expect("name checked")
    }

    /// Adds a state whose name avoids every existing name by appending primes.
    pub fn fresh_state(&mut self, base: &str) -> usize {
        let mut name = base.to_string();
        while self.state_index.contains_key(&name) {
            name.push('\'');
        }
        self.add_state(name).expect("fresh name")
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn add_transition(&mut self, p: usize, a: usize, q: usize) {
        debug_assert!(p < self.states.len() && q < self.states.len() && a < self.alphabet.len());
        self.transitions.insert((p, a, q));
    }

    pub fn has_transition(&self, p: usize, a: usize) -> bool {
        self.transitions.range((p, a, 0)..=(p, a, usize::MAX)).next().is_some()
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial.insert(q);
    }

    pub fn set_accepting(&mut self, q: usize) {
        self.accepting.insert(q);
    }

    pub fn build(self) -> Nfa {
        let n = self.states.len();
        let m = self.alphabet.len();
        let mut delta = vec![vec![Vec::new(); m]; n];
        for (p, a, q) in self.transitions {
            delta[p][a].push(q);
        }
        let mut accepting = vec![false; n];
        for q in self.accepting {
            accepting[q] = true;
        }
        Nfa {
            name: self.name,
            states: self.states,
            alphabet: self.alphabet,
            delta,
            initial: self.initial.into_iter().collect(),
            accepting,
            state_index: self.state_index,
            symbol_index: self.symbol_index,
        }
    }
}

impl Nfa {
    /// Builds an automaton from names. Rejects duplicate states, symbols and transitions,
    /// and any reference to an undeclared state or symbol.
    pub fn new(
        name: Option<String>,
        states: Vec<String>,
        alphabet: Vec<Symbol>,
        initial: &[String],
        accepting: &[String],
        transitions: &[(String, Symbol, String)],
    ) -> Result<Nfa> {
        let mut b = NfaBuilder::new();
        b.name = name;
        for s in alphabet {
            if b.symbol_id(&s).is_some() {
                return Err(Error::InvalidAutomaton(format!("duplicate symbol {:?}", s.as_str())));
            }
            b.add_symbol(s);
        }
        for q in states {
            b.add_state(q)?;
        }
        let lookup = |b: &NfaBuilder, q: &str| b.state_id(q).ok_or_else(|| Error::UnknownState(q.to_string()));
        for q in initial {
            let i = lookup(&b, q)?;
            if !b.initial.insert(i) {
                return Err(Error::InvalidAutomaton(format!("state {q:?} listed twice as initial")));
            }
        }
        for q in accepting {
            let i = lookup(&b, q)?;
            if !b.accepting.insert(i) {
                return Err(Error::InvalidAutomaton(format!("state {q:?} listed twice as accepting")));
            }
        }
        for (p, a, q) in transitions {
            let pi = lookup(&b, p)?;
            let qi = lookup(&b, q)?;
            let ai = b.symbol_id(a).ok_or_else(|| Error::UnknownSymbol(a.to_string()))?;
            if !b.transitions.insert((pi, ai, qi)) {
                return Err(Error::InvalidAutomaton(format!("duplicate transition {p} -{a}-> {q}")));
            }
        }
        Ok(b.build())
    }

    /// Returns a builder holding a copy of this automaton.
    pub fn to_builder(&self) -> NfaBuilder {
        let mut b = NfaBuilder::with_alphabet(&self.alphabet);
        b.name = self.name.clone();
        for q in &self.states {
            b.add_state(q.clone()).expect("unique names");
        }
        for (p, a, q) in self.transitions() {
            b.add_transition(p, a, q);
        }
        for &q in &self.initial {
            b.set_initial(q);
        }
        for q in self.accepting_states() {
            b.set_accepting(q);
        }
        b
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn symbol(&self, a: usize) -> &Symbol {
        &self.alphabet[a]
    }

    pub fn symbol_id(&self, s: &Symbol) -> Option<usize> {
        self.symbol_index.get(s).copied()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_initial(&self, q: usize) -> bool {
        self.initial.binary_search(&q).is_ok()
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&q| self.accepting[q]).collect()
    }

    /// Targets of `q` under symbol index `a`, sorted.
    pub fn succ(&self, q: usize, a: usize) -> &[usize] {
        &self.delta[q][a]
    }

    /// All transitions `(p, a, q)` by index, in `(p, a, q)` order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter().enumerate().flat_map(move |(a, ts)| ts.iter().map(move |&q| (p, a, q)))
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().flatten().map(Vec::len).sum()
    }

    /// Successor lists ignoring labels (self-loops included).
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        self.delta
            .iter()
            .map(|row| {
                let mut v: Vec<usize> = row.iter().flatten().copied().collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect()
    }

    pub fn encode(&self, w: &Word) -> Result<Vec<usize>> {
        w.symbols()
            .iter()
            .map(|s| self.symbol_id(s).ok_or_else(|| Error::UnknownSymbol(s.to_string())))
            .collect()
    }

    pub fn decode(&self, w: &[usize]) -> Word {
        w.iter().map(|&a| self.alphabet[a].clone()).collect()
    }

    /// Image of a sorted state set under one symbol, sorted.
    pub fn step(&self, set: &[usize], a: usize) -> Vec<usize> {
        match set {
            [] => Vec::new(),
            [q] => self.delta[*q][a].clone(),
            _ => {
                let mut out: Vec<usize> = set.iter().flat_map(|&q| self.delta[q][a].iter().copied()).collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }

    /// Image of a sorted state set under a word given by symbol indices.
    pub fn run(&self, set: &[usize], w: &[usize]) -> Vec<usize> {
        let mut cur = set.to_vec();
        for &a in w {
            if cur.is_empty() {
                break;
            }
            cur = self.step(&cur, a);
        }
        cur
    }

    pub fn accepts_indices(&self, w: &[usize]) -> bool {
        self.run(&self.initial, w).iter().any(|&q| self.accepting[q])
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        Ok(self.accepts_indices(&self.encode(w)?))
    }

    /// `δ(S, w)`.
    pub fn post_image(&self, s: &MacroState, w: &Word) -> Result<MacroState> {
        if let Some(&q) = s.states().iter().find(|&&q| q >= self.num_states()) {
            return Err(Error::UnknownState(q.to_string()));
        }
        let w = self.encode(w)?;
        Ok(MacroState::from_sorted(self.run(s.states(), &w)))
    }

    pub fn initial_macro_state(&self) -> MacroState {
        MacroState::from_sorted(self.initial.clone())
    }

    /// `|I| = 1` and every `δ(q, a)` is a singleton.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.delta.iter().flatten().all(|ts| ts.len() == 1)
    }

    /// Every `δ(q, a)` is non-empty.
    pub fn is_complete(&self) -> bool {
        self.delta.iter().flatten().all(|ts| !ts.is_empty())
    }

    fn require_dfa(&self) -> Result<()> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        Ok(())
    }

    fn set_name(&self, set: &[usize]) -> String {
        let names: Vec<&str> = set.iter().map(|&q| self.states[q].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Subset construction from `I`. States are the reachable macro-states, in BFS order.
    pub fn determinize(&self) -> Nfa {
        self.subset_construction(None).expect("no budget").0
    }

    /// Subset construction that fails once more than `budget` macro-states are discovered.
    pub(crate) fn subset_construction(&self, budget: Option<usize>) -> Result<(Nfa, Vec<MacroState>)> {
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut sets: Vec<Vec<usize>> = vec![self.initial.clone()];
        index.insert(self.initial.clone(), 0);
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            for a in 0..self.num_symbols() {
                let t = self.step(&sets[i], a);
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        let j = sets.len();
                        if budget.is_some_and(|b| j >= b) {
                            return Err(Error::BudgetExceeded(budget.unwrap_or_default()));
                        }
                        index.insert(t.clone(), j);
                        sets.push(t);
                        j
                    }
                };
                edges.push((i, a, j));
            }
            i += 1;
        }
        let names = uniquify(sets.iter().map(|s| self.set_name(s)).collect());
        let mut b = NfaBuilder::with_alphabet(&self.alphabet);
        b.name = self.name.clone();
        for (k, name) in names.into_iter().enumerate() {
            b.add_state(name)?;
            if sets[k].iter().any(|&q| self.accepting[q]) {
                b.set_accepting(k);
            }
        }
        b.set_initial(0);
        for (p, a, q) in edges {
            b.add_transition(p, a, q);
        }
        Ok((b.build(), sets.into_iter().map(MacroState::from_sorted).collect()))
    }

    /// Minimal complete DFA of a complete DFA. Unreachable states are dropped; states are
    /// numbered in BFS order from the initial state and named after the first member of
    /// their class in that order.
    pub fn minimize(&self) -> Result<Nfa> {
        self.require_dfa()?;
        let m = self.num_symbols();
        let order = self.bfs_order();
        let mut pos = vec![usize::MAX; self.num_states()];
        for (i, &q) in order.iter().enumerate() {
            pos[q] = i;
        }
        let trans: Vec<Vec<usize>> =
            order.iter().map(|&q| (0..m).map(|a| pos[self.delta[q][a][0]]).collect()).collect();
        let mut block: Vec<usize> = order.iter().map(|&q| usize::from(self.accepting[q])).collect();
        let mut count = renumber(&mut block);
        loop {
            let mut sig_index: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = Vec::with_capacity(block.len());
            for i in 0..block.len() {
                let mut sig = Vec::with_capacity(m + 1);
                sig.push(block[i]);
                sig.extend(trans[i].iter().map(|&t| block[t]));
                let len = sig_index.len();
                next.push(*sig_index.entry(sig).or_insert(len));
            }
            let new_count = sig_index.len();
            block = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut b = NfaBuilder::with_alphabet(&self.alphabet);
        b.name = self.name.clone();
        let mut rep = vec![usize::MAX; count];
        for (i, &blk) in block.iter().enumerate() {
            if rep[blk] == usize::MAX {
                rep[blk] = i;
                b.add_state(self.states[order[i]].clone())?;
                if self.accepting[order[i]] {
                    b.set_accepting(blk);
                }
            }
        }
        for (blk, &i) in rep.iter().enumerate() {
            for a in 0..m {
                b.add_transition(blk, a, block[trans[i][a]]);
            }
        }
        b.set_initial(block[0]);
        Ok(b.build())
    }

    /// States reachable from `I`, in BFS order following the alphabet order.
    pub(crate) fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            seen[q] = true;
            queue.push_back(q);
        }
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for a in 0..self.num_symbols() {
                for &t in &self.delta[q][a] {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        order
    }

    /// Complement of a complete DFA (accepting states flipped).
    pub fn complement(&self) -> Result<Nfa> {
        self.require_dfa()?;
        if !self.is_complete() {
            return Err(Error::NotComplete);
        }
        let mut c = self.clone();
        for f in c.accepting.iter_mut() {
            *f = !*f;
        }
        Ok(c)
    }

    /// Reachable part of the synchronous product; alphabets must be equal as sets.
    pub fn product_intersection(&self, other: &Nfa) -> Result<Nfa> {
        if !same_alphabet(self, other) {
            return Err(Error::AlphabetMismatch);
        }
        let map: Vec<usize> =
            self.alphabet.iter().map(|s| other.symbol_id(s).expect("same alphabet")).collect();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for &p in &self.initial {
            for &q in &other.initial {
                index.insert((p, q), pairs.len());
                pairs.push((p, q));
            }
        }
        let mut edges = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for (a, &b) in map.iter().enumerate() {
                for &p2 in &self.delta[p][a] {
                    for &q2 in &other.delta[q][b] {
                        let j = *index.entry((p2, q2)).or_insert_with(|| {
                            pairs.push((p2, q2));
                            pairs.len() - 1
                        });
                        edges.push((i, a, j));
                    }
                }
            }
            i += 1;
        }
        let names = uniquify(
            pairs.iter().map(|&(p, q)| format!("({},{})", self.states[p], other.states[q])).collect(),
        );
        let mut b = NfaBuilder::with_alphabet(&self.alphabet);
        for (k, name) in names.into_iter().enumerate() {
            b.add_state(name)?;
            let (p, q) = pairs[k];
            if self.accepting[p] && other.accepting[q] {
                b.set_accepting(k);
            }
        }
        let initial_count = self.initial.len() * other.initial.len();
        for k in 0..initial_count {
            b.set_initial(k);
        }
        for (p, a, q) in edges {
            b.add_transition(p, a, q);
        }
        Ok(b.build())
    }

    /// `(true, None)` when the language is empty, else `(false, Some(w))` with `w` a
    /// shortest accepted word.
    pub fn is_empty(&self) -> (bool, Option<Word>) {
        let n = self.num_states();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            seen[q] = true;
            queue.push_back(q);
        }
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur] {
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                return (false, Some(self.decode(&w)));
            }
            for a in 0..self.num_symbols() {
                for &t in &self.delta[q][a] {
                    if !seen[t] {
                        seen[t] = true;
                        parent[t] = Some((q, a));
                        queue.push_back(t);
                    }
                }
            }
        }
        (true, None)
    }

    /// Number of transitions on a longest simple path from an initial state, ignoring
    /// self-loops. Defined for partially ordered automata only.
    pub fn depth(&self) -> Result<usize> {
        let adj = self.adjacency();
        let order = graph::topo_order(&adj).ok_or(Error::NotPartiallyOrdered)?;
        let mut longest = vec![0usize; self.num_states()];
        for &q in order.iter().rev() {
            longest[q] = adj[q].iter().filter(|&&t| t != q).map(|&t| longest[t] + 1).max().unwrap_or(0);
        }
        Ok(self.initial.iter().map(|&q| longest[q]).max().unwrap_or(0))
    }

    /// Copy over a larger alphabet, listed in the given order. New symbols get no transitions.
    pub fn with_alphabet(&self, alphabet: &[Symbol]) -> Result<Nfa> {
        let mut b = NfaBuilder::with_alphabet(alphabet);
        if b.num_symbols() != alphabet.len() {
            return Err(Error::InvalidAutomaton("duplicate symbol in alphabet".into()));
        }
        for s in &self.alphabet {
            if b.symbol_id(s).is_none() {
                return Err(Error::AlphabetMismatch);
            }
        }
        b.name = self.name.clone();
        for q in &self.states {
            b.add_state(q.clone())?;
        }
        for (p, a, q) in self.transitions() {
            let a2 = b.symbol_id(&self.alphabet[a]).expect("checked");
            b.add_transition(p, a2, q);
        }
        for &q in &self.initial {
            b.set_initial(q);
        }
        for q in self.accepting_states() {
            b.set_accepting(q);
        }
        Ok(b.build())
    }

    /// Sub-automaton on the states satisfying `keep`, in their original order.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Nfa {
        let mut b = NfaBuilder::with_alphabet(&self.alphabet);
        b.name = self.name.clone();
        let mut map = vec![usize::MAX; self.num_states()];
        for q in (0..self.num_states()).filter(|&q| keep(q)) {
            map[q] = b.add_state(self.states[q].clone()).expect("unique names");
            if self.accepting[q] {
                b.set_accepting(map[q]);
            }
        }
        for &q in &self.initial {
            if map[q] != usize::MAX {
                b.set_initial(map[q]);
            }
        }
        for (p, a, q) in self.transitions() {
            if map[p] != usize::MAX && map[q] != usize::MAX {
                b.add_transition(map[p], a, map[q]);
            }
        }
        b.build()
    }

    /// Completion with a fresh non-accepting sink that loops on every symbol.
    /// Returns a clone when already complete.
    pub fn completed(&self) -> Nfa {
        if self.is_complete() {
            return self.clone();
        }
        let mut b = self.to_builder();
        let sink = b.fresh_state("sink");
        for p in 0..b.num_states() {
            for a in 0..b.num_symbols() {
                if !b.has_transition(p, a) {
                    b.add_transition(p, a, sink);
                }
            }
        }
        b.build()
    }

    /// Canonical JSON: states and alphabet in declared order, transitions sorted by
    /// `(source, symbol, target)` names.
    pub fn to_json(&self) -> String {
        let q = |s: &str| serde_json::to_string(s).expect("string serializes");
        let list = |items: Vec<&str>| items.into_iter().map(q).collect::<Vec<_>>().join(", ");
        let mut out = String::from("{\n");
        if let Some(name) = &self.name {
            out.push_str(&format!("  \"name\": {},\n", q(name)));
        }
        out.push_str(&format!("  \"alphabet\": [{}],\n", list(self.alphabet.iter().map(Symbol::as_str).collect())));
        out.push_str(&format!("  \"states\": [{}],\n", list(self.states.iter().map(String::as_str).collect())));
        out.push_str(&format!(
            "  \"initial\": [{}],\n",
            list(self.initial.iter().map(|&i| self.states[i].as_str()).collect())
        ));
        out.push_str(&format!(
            "  \"accepting\": [{}],\n",
            list(self.accepting_states().into_iter().map(|i| self.states[i].as_str()).collect())
        ));
        let mut ts: Vec<(&str, &str, &str)> = self
            .transitions()
            .map(|(p, a, r)| (self.states[p].as_str(), self.alphabet[a].as_str(), self.states[r].as_str()))
            .collect();
        ts.sort_unstable();
        if ts.is_empty() {
            out.push_str("  \"transitions\": []\n");
        } else {
            out.push_str("  \"transitions\": [\n");
            let lines: Vec<String> =
                ts.iter().map(|(p, a, r)| format!("    [{}, {}, {}]", q(p), q(a), q(r))).collect();
            out.push_str(&lines.join(",\n"));
            out.push_str("\n  ]\n");
        }
        out.push_str("}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Nfa> {
        let file: NfaFile = serde_json::from_str(text)?;
        Nfa::try_from(file)
    }
}

/// Gives both automata the same alphabet (the first one's order, then the second one's
/// extra symbols). Added symbols have no transitions.
pub fn pad_alphabets(a: &Nfa, b: &Nfa) -> (Nfa, Nfa) {
    let mut alphabet = a.alphabet.clone();
    for s in &b.alphabet {
        if a.symbol_id(s).is_none() {
            alphabet.push(s.clone());
        }
    }
    (a.with_alphabet(&alphabet).expect("superset"), b.with_alphabet(&alphabet).expect("superset"))
}

pub(crate) fn same_alphabet(a: &Nfa, b: &Nfa) -> bool {
    a.num_symbols() == b.num_symbols() && a.alphabet.iter().all(|s| b.symbol_id(s).is_some())
}

/// Numbers values by first appearance; returns the number of distinct values.
fn renumber(v: &mut [usize]) -> usize {
    let mut map = HashMap::new();
    for x in v.iter_mut() {
        let len = map.len();
        *x = *map.entry(*x).or_insert(len);
    }
    map.len()
}

/// Makes names pairwise distinct by appending primes to later duplicates.
pub(crate) fn uniquify(names: Vec<String>) -> Vec<String> {
    let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
    names
        .into_iter()
        .map(|mut n| {
            while seen.contains(&n) {
                n.push('\'');
            }
            seen.insert(n.clone());
            n
        })
        .collect()
}

/// JSON interchange form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NfaFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub accepting: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
}

impl TryFrom<NfaFile> for Nfa {
    type Error = Error;
    fn try_from(f: NfaFile) -> Result<Nfa> {
        let alphabet = f.alphabet.into_iter().map(Symbol::new).collect::<Result<Vec<_>>>()?;
        let transitions = f
            .transitions
            .into_iter()
            .map(|(p, a, q)| Ok((p, Symbol::new(a)?, q)))
            .collect::<Result<Vec<_>>>()?;
        Nfa::new(f.name, f.states, alphabet, &f.initial, &f.accepting, &transitions)
    }
}

impl From<Nfa> for NfaFile {
    fn from(a: Nfa) -> NfaFile {
        let mut transitions: Vec<(String, String, String)> = a
            .transitions()
            .map(|(p, s, q)| (a.states[p].clone(), a.alphabet[s].to_string(), a.states[q].clone()))
            .collect();
        transitions.sort();
        NfaFile {
            name: a.name.clone(),
            alphabet: a.alphabet.iter().map(|s| s.to_string()).collect(),
            states: a.states.clone(),
            initial: a.initial.iter().map(|&q| a.states[q].clone()).collect(),
            accepting: a.accepting_states().into_iter().map(|q| a.states[q].clone()).collect(),
            transitions,
        }
    }
}
