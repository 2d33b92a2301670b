//! Space-bounded Turing machine acceptance as non-universality of a ptNFA.
//!
//! A run on a tape of `p` cells is written over `Δ_{#$} = {#, $} ∪ T × (Q ∪ {•})` as
//! `#w_1#w_2#...#w_m#$^j`; each letter of the gadget alphabet `Π = Σ_n × Δ_{#$}` pairs one such
//! symbol with a letter of `W_{n,n}`. The gadget accepts every word whose first projection is not
//! `W_{n,n}` or whose second projection is not an accepting run, so it is universal iff the
//! machine rejects.
//!
//! Letters of `Π` are named `a{i}:{d}` where `d` is `#`, `$`, `t@q` (head on the cell, in state
//! `q`) or `t@-` (no head).

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::automaton::{Nfa, NfaBuilder, Symbol, Word};
use crate::constructions::wword::{a_kn, letter, state_name, w_length, w_word, MAX_WORD_LEN};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
    S,
}

/// A deterministic machine with tape alphabet `tape`, input alphabet `input ⊆ tape`, a blank
/// outside `input`, and `space` tape cells. `delta` lists `(q, t, q', t', move)` and must be
/// total on `Q × T`. The accepting state `qf` must loop without changing anything.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TmSpec {
    pub states: Vec<String>,
    pub tape: Vec<String>,
    pub input: Vec<String>,
    pub blank: String,
    pub q0: String,
    pub qf: String,
    pub delta: Vec<(String, String, String, String, Move)>,
    pub space: usize,
}

/// A configuration: state, 0-based head position and tape contents, all by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config {
    pub state: usize,
    pub head: usize,
    pub tape: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    /// Configurations from the initial one up to the first accepting one.
    Accepts(Vec<Config>),
    /// The run cycles without reaching `qf`.
    Rejects,
}

fn check_name(kind: &str, name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || matches!(c, '"' | '@' | ':')) {
        return Err(Error::InvalidMachine(format!("bad {kind} name {name:?}")));
    }
    Ok(())
}

/// Validated machine with transitions indexed by `[state][tape symbol]`.
#[derive(Clone, Debug)]
struct Machine {
    q0: usize,
    qf: usize,
    blank: usize,
    table: Vec<Vec<(usize, usize, Move)>>,
    space: usize,
}

impl TmSpec {
    pub fn validate(&self) -> Result<()> {
        self.compile().map(|_| ())
    }

    fn compile(&self) -> Result<Machine> {
        let bad = |m: String| Err(Error::InvalidMachine(m));
        for q in &self.states {
            check_name("state", q)?;
            if q == "-" {
                return bad("`-` is reserved and cannot name a state".into());
            }
        }
        for t in &self.tape {
            check_name("tape symbol", t)?;
        }
        let distinct = |v: &[String]| v.iter().collect::<HashSet<_>>().len() == v.len();
        if self.states.is_empty() || !distinct(&self.states) {
            return bad("states must be non-empty and distinct".into());
        }
        if self.tape.is_empty() || !distinct(&self.tape) {
            return bad("tape symbols must be non-empty and distinct".into());
        }
        let sid = |s: &str| self.states.iter().position(|q| q == s);
        let tid = |s: &str| self.tape.iter().position(|t| t == s);
        let (Some(q0), Some(qf)) = (sid(&self.q0), sid(&self.qf)) else {
            return bad("q0 or qf is not a state".into());
        };
        if q0 == qf {
            return bad("q0 and qf must differ".into());
        }
        let Some(blank) = tid(&self.blank) else {
            return bad("the blank is not a tape symbol".into());
        };
        if self.input.iter().any(|x| tid(x).is_none()) {
            return bad("input symbols must be tape symbols".into());
        }
        if self.input.contains(&self.blank) {
            return bad("the blank is an input symbol".into());
        }
        if self.space == 0 {
            return bad("space must be at least 1".into());
        }
        let mut table = vec![vec![None; self.tape.len()]; self.states.len()];
        for (q, t, q2, t2, mv) in &self.delta {
            let (Some(q), Some(t), Some(q2), Some(t2)) = (sid(q), tid(t), sid(q2), tid(t2)) else {
                return bad(format!("transition ({q}, {t}) uses an unknown state or symbol"));
            };
            if table[q][t].replace((q2, t2, *mv)).is_some() {
                return bad(format!("two transitions for ({}, {})", self.states[q], self.tape[t]));
            }
        }
        let mut out = Vec::with_capacity(table.len());
        for (q, row) in table.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (t, e) in row.into_iter().enumerate() {
                let Some(e) = e else {
                    return bad(format!("no transition for ({}, {})", self.states[q], self.tape[t]));
                };
                if q == qf && e != (qf, t, Move::S) {
                    return bad("the accepting state must loop without moving or writing".into());
                }
                r.push(e);
            }
            out.push(r);
        }
        Ok(Machine { q0, qf, blank, table: out, space: self.space })
    }

    fn input_indices(&self, x: &Word) -> Result<Vec<usize>> {
        if x.is_empty() {
            return Err(Error::InvalidMachine("the input word is empty".into()));
        }
        if x.len() > self.space {
            return Err(Error::InvalidMachine(format!("the input is longer than the {} tape cells", self.space)));
        }
        x.symbols()
            .iter()
            .map(|s| {
                if !self.input.iter().any(|i| i == s.as_str()) {
                    return Err(Error::InvalidMachine(format!("{s} is not an input symbol")));
                }
                Ok(self.tape.iter().position(|t| t == s.as_str()).expect("input symbols are tape symbols"))
            })
            .collect()
    }

    /// The first configuration on input `x`.
    pub fn initial_config(&self, x: &Word) -> Result<Config> {
        let m = self.compile()?;
        let mut tape = self.input_indices(x)?;
        tape.resize(m.space, m.blank);
        Ok(Config { state: m.q0, head: 0, tape })
    }

    /// One step; moves off either end of the tape leave the head where it is.
    pub fn step(&self, c: &Config) -> Result<Config> {
        Ok(self.compile()?.step(c))
    }

    /// Runs until the first accepting configuration or a repeated configuration.
    /// Reaching `qf` away from the first cell breaks the machine assumptions and is an error.
    pub fn simulate(&self, x: &Word, max_configs: usize) -> Result<RunOutcome> {
        let m = self.compile()?;
        let mut c = self.initial_config(x)?;
        let mut seen = HashSet::new();
        let mut run = Vec::new();
        loop {
            if c.state == m.qf {
                if c.head != 0 {
                    return Err(Error::InvalidMachine("qf is reached with the head away from the first cell".into()));
                }
                run.push(c);
                return Ok(RunOutcome::Accepts(run));
            }
            if !seen.insert(c.clone()) {
                return Ok(RunOutcome::Rejects);
            }
            if seen.len() > max_configs {
                return Err(Error::BudgetExceeded(max_configs));
            }
            let next = m.step(&c);
            run.push(c);
            c = next;
        }
    }
}

impl Machine {
    fn step(&self, c: &Config) -> Config {
        let (q2, t2, mv) = self.table[c.state][c.tape[c.head]];
        let mut tape = c.tape.clone();
        tape[c.head] = t2;
        let head = match mv {
            Move::L => c.head.saturating_sub(1),
            Move::R => (c.head + 1).min(self.space - 1),
            Move::S => c.head,
        };
        Config { state: q2, head, tape }
    }
}

/// Indexing of `Δ_{#$}`: `#` is 0, `$` is 1, then cells `(t, •), (t, q_1), ...` per tape symbol.
#[derive(Clone, Debug)]
pub struct DeltaAlphabet {
    names: Vec<String>,
    nq: usize,
}

pub const HASH: usize = 0;
pub const DOLLAR: usize = 1;

impl DeltaAlphabet {
    pub fn new(spec: &TmSpec) -> Self {
        let mut names = vec!["#".to_string(), "$".to_string()];
        for t in &spec.tape {
            names.push(format!("{t}@-"));
            for q in &spec.states {
                names.push(format!("{t}@{q}"));
            }
        }
        DeltaAlphabet { names, nq: spec.states.len() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, d: usize) -> &str {
        &self.names[d]
    }

    /// Cell with tape symbol `t` and the head in state `head`, if any.
    pub fn cell(&self, t: usize, head: Option<usize>) -> usize {
        2 + t * (self.nq + 1) + head.map_or(0, |q| q + 1)
    }

    fn split(&self, d: usize) -> Option<(usize, Option<usize>)> {
        let r = d.checked_sub(2)?;
        let h = r % (self.nq + 1);
        Some((r / (self.nq + 1), h.checked_sub(1)))
    }

    fn config(&self, c: &Config) -> Vec<usize> {
        c.tape.iter().enumerate().map(|(i, &t)| self.cell(t, (i == c.head).then_some(c.state))).collect()
    }
}

/// The symbol that follows `(l, c, r)` one configuration later. Windows containing `$` never
/// occur before a checked position in a well-formed word; they map to `$`.
fn next_symbol(m: &Machine, d: &DeltaAlphabet, l: usize, c: usize, r: usize) -> usize {
    if c == HASH {
        return HASH;
    }
    if [l, c, r].contains(&DOLLAR) {
        return DOLLAR;
    }
    let (t, h) = d.split(c).expect("cell");
    if let Some(q) = h {
        let (q2, t2, mv) = m.table[q][t];
        let stays = match mv {
            Move::S => true,
            Move::L => l == HASH,
            Move::R => r == HASH,
        };
        return d.cell(t2, stays.then_some(q2));
    }
    if let Some((tl, Some(ql))) = d.split(l) {
        let (q2, _, mv) = m.table[ql][tl];
        if mv == Move::R {
            return d.cell(t, Some(q2));
        }
    }
    if let Some((tr, Some(qr))) = d.split(r) {
        let (q2, _, mv) = m.table[qr][tr];
        if mv == Move::L {
            return d.cell(t, Some(q2));
        }
    }
    d.cell(t, None)
}

/// `f` on named symbols of `Δ_{#$}`.
pub fn f(spec: &TmSpec, l: &str, c: &str, r: &str) -> Result<String> {
    let m = spec.compile()?;
    let d = DeltaAlphabet::new(spec);
    let id = |s: &str| {
        d.names.iter().position(|x| x == s).ok_or_else(|| Error::InvalidMachine(format!("{s} is not in the run alphabet")))
    };
    Ok(d.name(next_symbol(&m, &d, id(l)?, id(c)?, id(r)?)).to_string())
}

/// Size limits for `tm_to_ptnfa`.
#[derive(Clone, Copy, Debug)]
pub struct TmLimits {
    pub max_states: usize,
    pub max_alphabet: usize,
}

impl Default for TmLimits {
    fn default() -> Self {
        TmLimits { max_states: 200_000, max_alphabet: 4096 }
    }
}

/// The generated automaton together with its parameters.
#[derive(Clone, Debug)]
pub struct TmGadget {
    pub automaton: Nfa,
    /// Index of `W_{n,n}` and `A_{n,n}`.
    pub n: usize,
    /// `|Π| = n · |Δ_{#$}|`.
    pub pi_size: usize,
    /// Component names with their state counts, in construction order.
    pub components: Vec<(String, usize)>,
    /// `|W_{n,n}|`, the length of every run encoding.
    pub word_length: u128,
}

/// Least `n` with `|W_{n,n}| >= 1 + |Δ|^p (p + 1)`.
pub fn choose_n(spec: &TmSpec) -> Result<usize> {
    spec.validate()?;
    let cells = BigUint::from(spec.tape.len() * (spec.states.len() + 1));
    let p = spec.space;
    let need = BigUint::from(1u32) + cells.pow(p as u32) * BigUint::from(p + 1);
    let mut n = 1usize;
    // C(2n, n) - 1, updated with C(2n+2, n+1) = C(2n, n) (2n+1)(2n+2) / (n+1)^2
    let mut binom = BigUint::from(2u32);
    while binom.clone() - 1u32 < need {
        binom = binom * BigUint::from((2 * n + 1) * (2 * n + 2)) / BigUint::from((n + 1) * (n + 1));
        n += 1;
    }
    Ok(n)
}

/// Second projection of length `len`: `#`, then `(len - 1) / (p + 1)` consecutive
/// configurations each followed by `#`, then `(len - 1) mod (p + 1)` dollars.
fn second_projection(spec: &TmSpec, x: &Word, len: usize) -> Result<Vec<usize>> {
    let m = spec.compile()?;
    let d = DeltaAlphabet::new(spec);
    let p = m.space;
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return Ok(out);
    }
    out.push(HASH);
    let mut c = spec.initial_config(x)?;
    for _ in 0..(len - 1) / (p + 1) {
        out.extend(d.config(&c));
        out.push(HASH);
        c = m.step(&c);
    }
    out.resize(len, DOLLAR);
    Ok(out)
}

fn pair_word(n: usize, d: &DeltaAlphabet, second: &[usize]) -> Result<Word> {
    let w = w_word(n, n)?;
    Ok(w.symbols()
        .iter()
        .zip(second)
        .map(|(a, &s)| Symbol::new(format!("{a}:{}", d.name(s))).expect("valid symbol"))
        .collect())
}

/// `W_{n,n}` paired with the machine's computation on `x`, which is repeated as needed.
/// This is the run encoding whether or not the machine accepts.
pub fn encode_computation(spec: &TmSpec, x: &Word, n: usize) -> Result<Word> {
    let len = w_length(n, n).filter(|&l| l <= MAX_WORD_LEN).ok_or_else(|| {
        Error::CapExceeded(format!("W_{{{n},{n}}} is longer than {MAX_WORD_LEN}"))
    })? as usize;
    let second = second_projection(spec, x, len)?;
    pair_word(n, &DeltaAlphabet::new(spec), &second)
}

/// The encoding of the accepting run of the machine on `x`, or `None` if it rejects.
pub fn encode_run(spec: &TmSpec, x: &Word, n: usize) -> Result<Option<Word>> {
    let budget = 1usize << 22;
    let RunOutcome::Accepts(run) = spec.simulate(x, budget)? else {
        return Ok(None);
    };
    let len = w_length(n, n).unwrap_or(u128::MAX);
    if (run.len() as u128) * (spec.space as u128 + 1) + 1 > len {
        return Err(Error::InvalidParameter(format!("the accepting run does not fit in |W_{{{n},{n}}}|")));
    }
    encode_computation(spec, x, n).map(Some)
}

struct Builder<'a> {
    b: NfaBuilder,
    a: Nfa,
    n: usize,
    nd: usize,
    restart: Vec<usize>,
    max: usize,
    entries: Vec<(usize, Vec<usize>)>,
    delta: &'a DeltaAlphabet,
}

impl Builder<'_> {
    /// Letter `(a_i, d)` with `i` 1-based.
    fn pi(&self, i: usize, d: usize) -> usize {
        (i - 1) * self.nd + d
    }

    /// Adds a copy of `enc(A_{n,n})`; returns the copy's state ids.
    fn enc(&mut self, prefix: &str) -> Result<Vec<usize>> {
        let map: Vec<usize> =
            self.a.states().iter().map(|q| self.b.add_state(format!("{prefix}.{q}"))).collect::<Result<_>>()?;
        for (p, x, q) in self.a.transitions() {
            for d in 0..self.nd {
                let l = self.pi(x + 1, d);
                self.b.add_transition(map[p], l, map[q]);
            }
        }
        for &q in self.a.initial() {
            self.b.set_initial(map[q]);
        }
        for q in self.a.accepting_states() {
            self.b.set_accepting(map[q]);
        }
        Ok(map)
    }

    /// Edges `(a_i, d)` from accepting states `s` of the copy with `a_i ∉ Σ(s)`.
    fn entry(&mut self, map: &[usize], ds: &[usize], target: impl Fn(usize) -> usize) {
        for (s, letters) in &self.entries {
            for &i in letters {
                for &d in ds {
                    let l = (i - 1) * self.nd + d;
                    self.b.add_transition(map[*s], l, target(d));
                }
            }
        }
    }

    /// Sends every undefined letter `(a_i, _)` of `states` to the copy's `(n+1;i)`.
    fn complete(&mut self, map: &[usize], states: &[usize]) {
        for &q in states {
            for i in 1..=self.n {
                for d in 0..self.nd {
                    let l = self.pi(i, d);
                    if !self.b.has_transition(q, l) {
                        self.b.add_transition(q, l, map[self.restart[i - 1]]);
                    }
                }
            }
        }
    }

    fn chain(&mut self, prefix: &str, len: usize) -> Result<Vec<usize>> {
        (0..len).map(|l| self.b.add_state(format!("{prefix}{l}"))).collect()
    }

    fn all(&mut self, p: usize, q: usize) {
        for l in 0..self.n * self.nd {
            self.b.add_transition(p, l, q);
        }
    }

    fn second(&mut self, p: usize, ds: &[usize], q: usize) {
        for i in 1..=self.n {
            for &d in ds {
                let l = self.pi(i, d);
                self.b.add_transition(p, l, q);
            }
        }
    }
}

fn estimate_states(n: usize, nd: usize, p: usize) -> u128 {
    let (n, nd, p) = (n as u128, nd as u128, p as u128);
    let enc = n * (2 * n + 1) + 1;
    let short = p + 3;
    let a_parts: u128 = (0..=p + 1).map(|j| enc + j + 1).sum();
    let tree = nd + nd * nd + nd * nd * nd * p;
    short + a_parts + (enc + tree) + (enc + 2 * p + 1) + (enc + 2 * p + 1) + (enc + p + 1) + 3
}

/// Builds the gadget for `spec` on input `x`: the disjoint union of
/// - a DFA for words shorter than `p + 2`,
/// - for each `0 <= j <= p + 1`, `Π^j (Π \ Σ_n × {δ_j}) Π*` over a copy of `enc(A_{n,n})`,
///   where `δ_j` is the `j`-th symbol of the initial configuration `#...#`,
/// - `B`: a wrong transition `δ_l δ δ_r Π^{p-1} z` with `z[2] ∉ {f(δ_l, δ, δ_r), $}`,
/// - `C1`: a last configuration shorter than `p`, before at most `p` dollars,
/// - `C2`: a last configuration without the head in `qf` on its first cell,
/// - `C3`: more than `p` trailing dollars,
/// - `C4`: a dollar followed by another letter.
///
/// Every component except the first and the last contains its own copy of `enc(A_{n,n})`,
/// which accepts all words whose first projection differs from `W_{n,n}`.
pub fn tm_to_ptnfa(spec: &TmSpec, x: &Word, limits: &TmLimits) -> Result<TmGadget> {
    let m = spec.compile()?;
    let init = spec.initial_config(x)?;
    let delta = DeltaAlphabet::new(spec);
    let nd = delta.len();
    let p = m.space;
    let n = choose_n(spec)?;
    let pi_size = n * nd;
    if pi_size > limits.max_alphabet {
        return Err(Error::CapExceeded(format!("|Π| = {pi_size} exceeds {}", limits.max_alphabet)));
    }
    let est = estimate_states(n, nd, p);
    if est > limits.max_states as u128 {
        return Err(Error::CapExceeded(format!("about {est} states exceed {}", limits.max_states)));
    }
    let word_length = w_length(n, n).expect("small n");

    let a = a_kn(n, n)?;
    let restart: Vec<usize> = (1..=n).map(|i| a.state_id(&state_name(n + 1, i)).expect("state")).collect();
    let max = a.state_id("max").expect("max");
    let entries: Vec<(usize, Vec<usize>)> = a
        .accepting_states()
        .into_iter()
        .filter_map(|s| {
            let free: Vec<usize> = (1..=n).filter(|&i| !a.succ(s, i - 1).contains(&s)).collect();
            (!free.is_empty()).then_some((s, free))
        })
        .collect();
    let mut alphabet = Vec::with_capacity(pi_size);
    for i in 1..=n {
        for d in 0..nd {
            alphabet.push(Symbol::new(format!("{}:{}", letter(i), delta.name(d)))?);
        }
    }
    let mut g = Builder {
        b: NfaBuilder::with_alphabet(&alphabet),
        a,
        n,
        nd,
        restart,
        max,
        entries,
        delta: &delta,
    };
    g.b.set_name("tm");
    let mut components = Vec::new();
    let mut mark = 0usize;
    let mut close = |g: &Builder, name: String, comps: &mut Vec<(String, usize)>| {
        let now = g.b.num_states();
        comps.push((name, now - mark));
        mark = now;
    };

    // words shorter than p + 2
    let short = g.chain("short.s", p + 2)?;
    let sink = g.b.add_state("short.sink")?;
    for w in short.windows(2) {
        g.all(w[0], w[1]);
    }
    g.all(short[p + 1], sink);
    g.all(sink, sink);
    for &s in &short {
        g.b.set_accepting(s);
    }
    g.b.set_initial(short[0]);
    close(&g, "short".into(), &mut components);

    // a wrong symbol at position j of the initial configuration
    let mut expected = vec![HASH];
    expected.extend(delta.config(&init));
    expected.push(HASH);
    let others: Vec<usize> = (0..nd).collect();
    for (j, &dj) in expected.iter().enumerate() {
        let map = g.enc(&format!("A{j}"))?;
        let c = g.chain(&format!("A{j}.c"), j + 1)?;
        g.b.set_initial(c[0]);
        for w in c.windows(2) {
            g.all(w[0], w[1]);
        }
        let wrong: Vec<usize> = others.iter().copied().filter(|&d| d != dj).collect();
        g.second(c[j], &wrong, map[g.max]);
        g.complete(&map, &c[j..]);
        close(&g, format!("A{j}"), &mut components);
    }

    // wrong transitions
    let map = g.enc("B")?;
    let mut level1 = Vec::with_capacity(nd);
    for d1 in 0..nd {
        level1.push(g.b.add_state(format!("B.t{d1}"))?);
    }
    g.entry(&map, &others, |d| level1[d]);
    let mut finals = Vec::new();
    for (d1, &l1) in level1.iter().enumerate() {
        for d2 in 0..nd {
            let l2 = g.b.add_state(format!("B.t{d1}.{d2}"))?;
            g.second(l1, &[d2], l2);
            for d3 in 0..nd {
                let l3 = g.b.add_state(format!("B.t{d1}.{d2}.{d3}"))?;
                g.second(l2, &[d3], l3);
                let mut last = l3;
                for step in 1..p {
                    let next = g.b.add_state(format!("B.t{d1}.{d2}.{d3}/{step}"))?;
                    g.all(last, next);
                    last = next;
                }
                let expected = next_symbol(&m, g.delta, d1, d2, d3);
                let wrong: Vec<usize> = others.iter().copied().filter(|&d| d != expected && d != DOLLAR).collect();
                g.second(last, &wrong, map[g.max]);
                finals.push(last);
            }
        }
    }
    g.complete(&map, &finals);
    close(&g, "B".into(), &mut components);

    // C1: # then 1..p letters other than $, then at most p dollars, then the end
    let not_dollar: Vec<usize> = (0..nd).filter(|&d| d != DOLLAR).collect();
    let map = g.enc("C1")?;
    let h = g.b.add_state("C1.h")?;
    g.entry(&map, &[HASH], |_| h);
    let mid = g.chain("C1.m", p)?;
    let dol = g.chain("C1.d", p)?;
    g.second(h, &not_dollar, mid[0]);
    for w in mid.windows(2) {
        g.second(w[0], &not_dollar, w[1]);
    }
    for &q in &mid {
        g.second(q, &[DOLLAR], dol[0]);
    }
    for w in dol.windows(2) {
        g.second(w[0], &[DOLLAR], w[1]);
    }
    for &q in mid.iter().chain(&dol) {
        g.b.set_accepting(q);
    }
    let new: Vec<usize> = std::iter::once(h).chain(mid).chain(dol).collect();
    g.complete(&map, &new);
    close(&g, "C1".into(), &mut components);

    // C2: a first cell without the head in qf, p - 1 letters, #, at most p dollars
    let not_final: Vec<usize> = (2..nd).filter(|&d| delta.split(d).is_some_and(|(_, h)| h != Some(m.qf))).collect();
    let map = g.enc("C2")?;
    let cells = g.chain("C2.s", p)?;
    g.entry(&map, &not_final, |_| cells[0]);
    for w in cells.windows(2) {
        g.all(w[0], w[1]);
    }
    let tail = g.chain("C2.t", p + 1)?;
    g.second(cells[p - 1], &[HASH], tail[0]);
    for w in tail.windows(2) {
        g.second(w[0], &[DOLLAR], w[1]);
    }
    for &q in &tail {
        g.b.set_accepting(q);
    }
    let new: Vec<usize> = cells.into_iter().chain(tail).collect();
    g.complete(&map, &new);
    close(&g, "C2".into(), &mut components);

    // C3: p + 1 trailing dollars
    let map = g.enc("C3")?;
    let u = g.chain("C3.u", p + 1)?;
    g.entry(&map, &[DOLLAR], |_| u[0]);
    for w in u.windows(2) {
        g.second(w[0], &[DOLLAR], w[1]);
    }
    g.b.set_accepting(u[p]);
    g.complete(&map, &u);
    close(&g, "C3".into(), &mut components);

    // C4: a dollar followed by another letter
    let c4 = g.chain("C4.", 3)?;
    g.second(c4[0], &not_dollar, c4[0]);
    g.second(c4[0], &[DOLLAR], c4[1]);
    g.second(c4[1], &[DOLLAR], c4[1]);
    g.second(c4[1], &not_dollar, c4[2]);
    g.all(c4[2], c4[2]);
    g.b.set_initial(c4[0]);
    g.b.set_accepting(c4[2]);
    close(&g, "C4".into(), &mut components);

    Ok(TmGadget { automaton: g.b.build(), n, pi_size, components, word_length })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;

    /// Two states, tape `{1, _}`, one cell; `q0` moves to `qf` at once when `accept` holds,
    /// and otherwise loops forever.
    pub(crate) fn tiny(accept: bool) -> TmSpec {
        let target = if accept { "qf" } else { "q0" };
        let mut delta = Vec::new();
        for t in ["1", "_"] {
            delta.push(("q0".into(), t.into(), target.into(), t.into(), Move::S));
            delta.push(("qf".into(), t.into(), "qf".into(), t.into(), Move::S));
        }
        TmSpec {
            states: vec!["q0".into(), "qf".into()],
            tape: vec!["1".into(), "_".into()],
            input: vec!["1".into()],
            blank: "_".into(),
            q0: "q0".into(),
            qf: "qf".into(),
            delta,
            space: 1,
        }
    }

    fn one() -> Word {
        Word::parse("1").unwrap()
    }

    #[test]
    fn parameters_of_the_tiny_machine() {
        let spec = tiny(true);
        assert_eq!(DeltaAlphabet::new(&spec).len(), 8);
        // 1 + 6^1 * 2 = 13 > |W_{2,2}| = 5, <= |W_{3,3}| = 19
        assert_eq!(choose_n(&spec).unwrap(), 3);
        let g = tm_to_ptnfa(&spec, &one(), &TmLimits::default()).unwrap();
        assert_eq!(g.pi_size, 24);
        assert_eq!(g.word_length, 19);
        assert_eq!(g.components.len(), spec.space + 8);
        assert_eq!(g.automaton.num_states() as u128, estimate_states(3, 8, 1));
    }

    #[test]
    fn next_symbol_matches_steps() {
        let mut spec = tiny(true);
        spec.space = 3;
        spec.delta[0] = ("q0".into(), "1".into(), "q0".into(), "_".into(), Move::R);
        let d = DeltaAlphabet::new(&spec);
        let m = spec.compile().unwrap();
        let mut c = spec.initial_config(&Word::parse("1 1").unwrap()).unwrap();
        for _ in 0..5 {
            let next = m.step(&c);
            let mut row = vec![HASH];
            row.extend(d.config(&c));
            row.push(HASH);
            let want = d.config(&next);
            for i in 0..spec.space {
                assert_eq!(next_symbol(&m, &d, row[i], row[i + 1], row[i + 2]), want[i]);
            }
            c = next;
        }
        assert_eq!(f(&spec, "#", "1@q0", "1@-").unwrap(), "_@-");
        assert_eq!(f(&spec, "1@q0", "1@-", "_@-").unwrap(), "1@q0");
    }

    #[test]
    fn accepting_machine_run_is_rejected() {
        let spec = tiny(true);
        let g = tm_to_ptnfa(&spec, &one(), &TmLimits::default()).unwrap();
        let run = encode_run(&spec, &one(), g.n).unwrap().unwrap();
        assert_eq!(run.len(), 19);
        assert_eq!(run.symbols()[0].as_str(), "a1:#");
        assert_eq!(run.symbols()[1].as_str(), "a1:1@q0");
        assert!(!g.automaton.accepts(&run).unwrap());
        let r = classify(&g.automaton);
        assert_eq!(r.ptnfa, Some(true));
    }

    #[test]
    fn rejecting_machine_has_no_run() {
        let spec = tiny(false);
        assert_eq!(encode_run(&spec, &one(), 3).unwrap(), None);
        let g = tm_to_ptnfa(&spec, &one(), &TmLimits::default()).unwrap();
        let w = encode_computation(&spec, &one(), g.n).unwrap();
        assert!(g.automaton.accepts(&w).unwrap());
    }

    #[test]
    fn entry_is_always_possible_along_w() {
        for n in 1..=4 {
            let a = a_kn(n, n).unwrap();
            let w = a.encode(&w_word(n, n).unwrap()).unwrap();
            let mut set = a.initial().to_vec();
            for &x in &w {
                assert!(
                    set.iter().any(|&s| a.is_accepting(s) && !a.succ(s, x).contains(&s)),
                    "n = {n}: no entry before {x}"
                );
                set = a.step(&set, x);
            }
        }
    }

    #[test]
    fn assumptions_are_checked() {
        let mut spec = tiny(true);
        spec.q0 = "qf".into();
        assert!(spec.validate().is_err());
        let mut spec = tiny(true);
        spec.delta[1].4 = Move::R;
        assert!(spec.validate().is_err());
        let mut spec = tiny(true);
        spec.delta.pop();
        assert!(spec.validate().is_err());
        let mut spec = tiny(true);
        spec.input.push("_".into());
        assert!(spec.validate().is_err());
        assert!(tiny(true).initial_config(&Word::parse("1 1").unwrap()).is_err());
        assert!(tiny(true).initial_config(&Word::parse("_").unwrap()).is_err());
    }
}
