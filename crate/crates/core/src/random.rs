//! Seeded generators for property tests and the CLI.
//!
//! Every generator takes an `Rng`; `rng(seed)` gives the ChaCha8 stream used throughout, so a
//! failing case replays from its seed. States are named `0, 1, ...` and, for partially ordered
//! automata, transitions only go from a state to itself or to a larger state.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Nfa, NfaBuilder, Symbol, Word};
use crate::constructions::dag::Dag;
use crate::constructions::formula::{Cnf3Formula, DnfFormula};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a, b, c, ...`, then `s26, s27, ...`.
pub fn letters(m: usize) -> Vec<Symbol> {
    (0..m)
        .map(|i| {
            let name = if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("s{i}") };
            Symbol::new(name).expect("valid symbol")
        })
        .collect()
}

/// Shape of a random automaton.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub states: usize,
    pub symbols: usize,
    /// Probability of each candidate transition.
    pub density: f64,
    /// Every state gets a transition on every letter.
    pub complete: bool,
}

impl Shape {
    pub fn new(states: usize, symbols: usize) -> Self {
        Shape { states, symbols, density: 0.3, complete: false }
    }

    pub fn complete(mut self) -> Self {
        self.complete = true;
        self
    }

    pub fn density(mut self, d: f64) -> Self {
        self.density = d;
        self
    }
}

fn skeleton<R: Rng>(rng: &mut R, shape: &Shape, many_initial: bool) -> NfaBuilder {
    let mut b = NfaBuilder::with_alphabet(&letters(shape.symbols));
    for q in 0..shape.states {
        b.add_state(q.to_string()).expect("fresh state");
        if rng.gen_bool(0.5) {
            b.set_accepting(q);
        }
    }
    if shape.states > 0 {
        b.set_initial(0);
        for q in 1..shape.states {
            if many_initial && rng.gen_bool(0.15) {
                b.set_initial(q);
            }
        }
    }
    b
}

/// Any NFA.
pub fn nfa<R: Rng>(rng: &mut R, shape: &Shape) -> Nfa {
    let mut b = skeleton(rng, shape, true);
    let n = shape.states;
    for p in 0..n {
        for a in 0..shape.symbols {
            for q in 0..n {
                if rng.gen_bool(shape.density) {
                    b.add_transition(p, a, q);
                }
            }
            if shape.complete && !b.has_transition(p, a) {
                b.add_transition(p, a, rng.gen_range(0..n));
            }
        }
    }
    b.build()
}

/// A complete DFA with initial state `0`.
pub fn dfa<R: Rng>(rng: &mut R, shape: &Shape) -> Nfa {
    let mut b = skeleton(rng, shape, false);
    for p in 0..shape.states {
        for a in 0..shape.symbols {
            b.add_transition(p, a, rng.gen_range(0..shape.states));
        }
    }
    b.build()
}

/// A partially ordered NFA. Each `(q, a)` draws a self-loop with probability `density` and
/// each larger state with probability `density`.
pub fn ponfa<R: Rng>(rng: &mut R, shape: &Shape) -> Nfa {
    let mut b = skeleton(rng, shape, true);
    let n = shape.states;
    for p in 0..n {
        for a in 0..shape.symbols {
            for q in p..n {
                if rng.gen_bool(shape.density) {
                    b.add_transition(p, a, q);
                }
            }
            if shape.complete && !b.has_transition(p, a) {
                b.add_transition(p, a, rng.gen_range(p..n));
            }
        }
    }
    b.build()
}

/// A self-loop-deterministic poNFA: every `(q, a)` either loops and does nothing else, or
/// moves to larger states only.
pub fn rponfa<R: Rng>(rng: &mut R, shape: &Shape) -> Nfa {
    let mut b = skeleton(rng, shape, true);
    let n = shape.states;
    for p in 0..n {
        for a in 0..shape.symbols {
            if p + 1 == n || rng.gen_bool(0.4) {
                if shape.complete || rng.gen_bool(0.7) {
                    b.add_transition(p, a, p);
                }
                continue;
            }
            for q in p + 1..n {
                if rng.gen_bool(shape.density) {
                    b.add_transition(p, a, q);
                }
            }
            if shape.complete && !b.has_transition(p, a) {
                b.add_transition(p, a, rng.gen_range(p + 1..n));
            }
        }
    }
    b.build()
}

/// A complete partially ordered DFA with initial state `0`.
pub fn podfa<R: Rng>(rng: &mut R, shape: &Shape) -> Nfa {
    let mut b = skeleton(rng, shape, false);
    let n = shape.states;
    for p in 0..n {
        for a in 0..shape.symbols {
            let q = if rng.gen_bool(0.5) { p } else { rng.gen_range(p..n) };
            b.add_transition(p, a, q);
        }
    }
    b.build()
}

/// A word of the given length over `alphabet`.
pub fn word<R: Rng>(rng: &mut R, alphabet: &[Symbol], len: usize) -> Word {
    (0..len).map(|_| alphabet.choose(rng).expect("non-empty alphabet").clone()).collect()
}

/// A DNF formula with `vars` variables and `conjuncts` conjuncts of up to 3 literals.
pub fn dnf<R: Rng>(rng: &mut R, vars: usize, conjuncts: usize) -> DnfFormula {
    let conjuncts = (0..conjuncts)
        .map(|_| {
            let len = rng.gen_range(0..=3.min(vars));
            literals(rng, vars, len)
        })
        .collect();
    DnfFormula { vars, conjuncts }
}

/// A 3-CNF formula whose clauses have 1 to 3 distinct variables.
pub fn cnf3<R: Rng>(rng: &mut R, vars: usize, clauses: usize) -> Cnf3Formula {
    let clauses = (0..clauses)
        .map(|_| {
            let len = rng.gen_range(1..=3.min(vars));
            literals(rng, vars, len)
        })
        .collect();
    Cnf3Formula { vars, clauses }
}

fn literals<R: Rng>(rng: &mut R, vars: usize, count: usize) -> Vec<i64> {
    let mut vs: Vec<i64> = (1..=vars as i64).collect();
    vs.shuffle(rng);
    vs.truncate(count);
    vs.sort_unstable();
    vs.into_iter().map(|v| if rng.gen_bool(0.5) { v } else { -v }).collect()
}

/// A DAG on `n` nodes with edges `i -> j` (`i < j`) drawn with probability `density`;
/// `s` and `t` are distinct when `n > 1` and edges out of `t` are dropped.
pub fn dag<R: Rng>(rng: &mut R, n: usize, density: f64) -> Dag {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let s = rng.gen_range(0..n);
    let t = if n > 1 { (s + rng.gen_range(1..n)) % n } else { s };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (u, v) = (order[i], order[j]);
            if u != t && rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Dag { n, edges, s, t }
}
